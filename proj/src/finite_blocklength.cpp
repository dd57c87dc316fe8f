#include "fbl/finite_blocklength.hpp"

#include <cmath>

namespace fbl {

double delta_star(double rate, double cap, double theta_plus, long long n, long long tx) {
    if (n < 1 || tx < 1) throw std::domain_error("n and K must be positive");
    if (!(theta_plus > 0.0)) throw std::domain_error("theta_plus must be positive");

    const double nk = static_cast<double>(n) * static_cast<double>(tx);
    const double gap = cap - rate;
    const double tp2 = theta_plus * theta_plus;
    const double shifted = gap + tp2;
    const double log_term = tp2 * std::log(2.0 * M_PI * nk * tp2) / nk;
    const double disc = 1.0 - (gap * gap + log_term) / (shifted * shifted);
    if (disc < 0.0) {
        throw OutOfRegimeError(
            "delta_star discriminant is negative: (C-R)^2 + theta_+^2 log(2 pi nK theta_+^2)/nK = " +
            std::to_string(gap * gap + log_term) + " exceeds (C-R+theta_+^2)^2 = " +
            std::to_string(shifted * shifted));
    }
    return shifted * (1.0 - std::sqrt(disc));
}

FiniteBound finite_upper(double rate, const SystemGeometry& geom, double sigma2) {
    const SecondOrderStats stats = compute_stats(sigma2, geom.c(), geom.beta());
    const double nk = static_cast<double>(geom.nk());
    FiniteBound b;
    b.rate = rate;
    b.delta_star = delta_star(rate, stats.capacity, stats.theta_plus, geom.block_length, geom.tx);
    b.gaussian_term = normal_cdf(std::sqrt(nk) / stats.theta_plus *
                                 (rate - stats.capacity + b.delta_star));
    b.exp_term = std::exp(-nk * b.delta_star);
    b.total = b.gaussian_term + b.exp_term;
    return b;
}

std::vector<SweepRow> sweep(SweepKind kind, const std::vector<double>& grid,
                            const SweepParams& params) {
    if (grid.empty()) throw std::domain_error("sweep grid must be nonempty");
    for (size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw std::domain_error("sweep grid must be strictly increasing");
        }
    }

    std::vector<SweepRow> rows;
    rows.reserve(grid.size());
    for (double x : grid) {
        SweepRow row;
        row.x = x;
        try {
            if (kind == SweepKind::snr) {
                const SystemGeometry geom = make_geometry(params.rx, params.tx, params.block_length);
                row.bound = finite_upper(params.rate, geom, sigma2_from_snr_db(x));
            } else {
                const double sigma2 = sigma2_from_snr_db(params.snr_db);
                const int n = static_cast<int>(std::lround(x * params.tx));
                if (std::abs(x * params.tx - n) > 1e-9 || n < 1) {
                    throw std::domain_error("n/K grid point does not give a positive integer n");
                }
                const SystemGeometry geom = make_geometry(params.rx, params.tx, n);
                row.bound = finite_upper(params.rate, geom, sigma2);
                const double r = params.tx * (params.rate - capacity(sigma2, geom.c()));
                row.outage = outage_bounds(r, sigma2, geom.c(), geom.beta());
            }
        } catch (const std::exception& e) {
            row.bound.reset();
            row.outage.reset();
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace fbl
