#include "fbl/second_order.hpp"

#include <cmath>

namespace fbl {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::domain_error(std::string(name) + " must be positive and finite");
    }
}

// -log(1 - delta0^2 / (c (1+delta0)^2)), the per-beta variance of the
// log-determinant fluctuations. Positive for every sigma^2, c > 0.
double log_variance_term(double d0, double c) {
    const double ratio = d0 / (1.0 + d0);
    return -std::log1p(-ratio * ratio / c);
}

} // namespace

SystemGeometry make_geometry(int rx, int tx, int block_length) {
    if (rx < 1 || tx < 1 || block_length < 1) {
        throw std::domain_error("geometry requires positive antenna counts and block length");
    }
    return {rx, tx, block_length};
}

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / M_SQRT2);
}

double sigma2_from_snr_db(double snr_db) {
    return std::pow(10.0, -snr_db / 10.0);
}

double snr_db_from_sigma2(double sigma2) {
    require_positive(sigma2, "sigma2");
    return -10.0 * std::log10(sigma2);
}

double capacity(double sigma2, double c) {
    require_positive(sigma2, "sigma2");
    require_positive(c, "c");
    const double d0 = delta0({sigma2, c});
    return std::log1p(d0) + c * std::log1p(1.0 / (sigma2 * (1.0 + d0))) - d0 / (1.0 + d0);
}

SecondOrderStats compute_stats(double sigma2, double c, double beta,
                               const QuadratureSpec& spec) {
    require_positive(sigma2, "sigma2");
    require_positive(c, "c");
    require_positive(beta, "beta");

    const DeltaGammaTable base = delta_gamma_tables(sigma2, sigma2, c, 1);
    const double d0 = base.delta[0];
    const double d1 = base.delta[1];
    const double d0p = delta0_prime({sigma2, c});
    const double lvar = log_variance_term(d0, c);

    SecondOrderStats s;
    s.sigma2 = sigma2;
    s.c = c;
    s.beta = beta;
    s.capacity = capacity(sigma2, c);
    s.theta_minus = std::sqrt(beta * lvar + c + sigma2 * sigma2 * d0p);
    s.theta_plus = std::sqrt(beta * lvar + 2.0 * (c - sigma2 * d0));
    s.zeta0 = base.gamma[1];
    s.zeta2 = beta * d1 / std::pow(1.0 + d0, 4);

    const double cubic = d0 * std::pow(1.0 + d0, 3);
    const double head = -beta * (sigma2 * d1 * d1 + 2.0 * sigma2 / beta * d0 * (1.0 + d0) * d1) / cubic;
    const double tail = tail_quadrature(
        [&](double u) {
            const DeltaGammaTable t = delta_gamma_tables(u, sigma2, c, 2);
            return sigma2 * t.gamma[2] / (1.0 - c + u * (1.0 + 2.0 * t.delta[0]));
        },
        sigma2, spec);
    s.zeta1_lin = head - beta * tail;

    const double num = d0 * d0 * d1 * d1 -
                       (d0 + sigma2 * d1) *
                           (-sigma2 * d1 * d1 * d1 + (1.0 + 2.0 * d0) * d1 * d1 - d0 * d0 * d1);
    s.zeta1_quad = beta * num / (cubic * cubic);

    if (!(s.theta_plus > s.theta_minus) || !(s.theta_minus > 0.0) || !(s.zeta0 > 0.0) ||
        !(s.zeta2 > 0.0) || !(s.capacity > 0.0)) {
        throw std::logic_error("second-order statistics violate their invariants");
    }
    return s;
}

ErrorBounds pe_bounds(double r, const SecondOrderStats& stats) {
    ErrorBounds b;
    b.r = r;
    b.upper = normal_cdf(r / stats.theta_plus);
    // Above capacity the lower bound is exactly 1/2, not Phi(r/theta_-).
    b.lower = (r > 0.0) ? 0.5 : normal_cdf(r / stats.theta_minus);
    return b;
}

OutageBounds outage_bounds(double r, double sigma2, double c, double beta) {
    require_positive(sigma2, "sigma2");
    require_positive(c, "c");
    require_positive(beta, "beta");

    const double d0 = delta0({sigma2, c});
    const double d0p = delta0_prime({sigma2, c});
    const double lvar = log_variance_term(d0, c);
    const double theta_minus_out = std::sqrt(lvar + (c + sigma2 * sigma2 * d0p) / beta);
    const double theta_plus_out = std::sqrt(lvar + 2.0 * (c - sigma2 * d0) / beta);
    const double theta_out = std::sqrt(lvar);

    OutageBounds b;
    b.r = r;
    b.lower = std::min(normal_cdf(r / theta_minus_out), 0.5);
    b.upper = normal_cdf(r / theta_plus_out);
    b.limit = normal_cdf(r / theta_out);
    return b;
}

ConstrainedTheta theta_n_constrained(const SecondOrderStats& stats, const InputSpread& spread) {
    if (!(spread.a <= 1.0) || !(spread.b >= spread.a * spread.a)) {
        throw std::domain_error("input spread requires a <= 1 and b >= a^2");
    }
    ConstrainedTheta t;
    t.radicand = stats.theta_minus * stats.theta_minus +
                 stats.zeta1_lin * spread.a + stats.zeta1_quad * spread.a * spread.a +
                 stats.zeta2 * spread.b;
    t.positive_variance = t.radicand > 0.0;
    t.value = t.positive_variance ? std::sqrt(t.radicand) : 0.0;
    return t;
}

SnrLimits asymptotic_limits(double c, double beta) {
    require_positive(c, "c");
    require_positive(beta, "beta");
    SnrLimits lim;
    lim.low_snr_capacity_coeff = c;
    lim.low_snr_theta_plus_sq_coeff = 2.0 * c;
    lim.low_snr_theta_minus_sq_coeff = 2.0 * c;
    if (c == 1.0) {
        lim.high_snr_finite = false;
        return lim;
    }
    lim.high_snr_finite = true;
    if (c < 1.0) {
        const double l = -beta * std::log1p(-c);
        lim.high_snr_theta_minus_sq = l + c;
        lim.high_snr_theta_plus_sq = l + 2.0 * c;
    } else {
        const double l = -beta * std::log1p(-1.0 / c);
        lim.high_snr_theta_minus_sq = l + 1.0;
        lim.high_snr_theta_plus_sq = l + 2.0;
    }
    return lim;
}

} // namespace fbl
