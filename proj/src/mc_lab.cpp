#include "fbl/mc_lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "fbl/philox.hpp"

namespace fbl {

namespace {

void validate_config(const TrialConfig& config) {
    if (config.geom.rx < 1 || config.geom.tx < 1 || config.geom.block_length < 1) {
        throw std::domain_error("trial config requires a valid geometry");
    }
    if (!(config.sigma2 > 0.0)) throw std::domain_error("sigma2 must be positive");
    if (config.trials < 1) throw std::domain_error("trials must be >= 1");
}

CMatrix draw_matrix(TrialStream& stream, int rows, int cols, bool qpsk) {
    CMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            m(i, j) = qpsk ? stream.next_qpsk() : stream.next_cnormal();
        }
    }
    return m;
}

std::pair<double, InputSpread> evaluate_draw(const TrialConfig& config, std::uint64_t attempt,
                                             long trial_index) {
    const int n_rx = config.geom.rx;
    const int n_tx = config.geom.tx;
    const int n = config.geom.block_length;

    TrialStream stream(config.seed, static_cast<std::uint64_t>(trial_index), attempt);
    const CMatrix h = draw_matrix(stream, n_rx, n_tx, false);
    const CMatrix x = draw_matrix(stream, n_tx, n, config.input_law == InputLaw::qpsk);
    const CMatrix w = draw_matrix(stream, n_rx, n, false);
    return information_density(h, x, w, config.sigma2);
}

} // namespace

std::pair<double, InputSpread> information_density(const CMatrix& h, const CMatrix& x,
                                                   const CMatrix& w, double sigma2) {
    if (!(sigma2 > 0.0)) throw std::domain_error("sigma2 must be positive");
    const int n_rx = h.rows();
    const int n_tx = h.cols();
    const int n = x.cols();
    if (x.rows() != n_tx || w.rows() != n_rx || w.cols() != n) {
        throw std::invalid_argument("information_density: shape mismatch");
    }

    const double inv_k = 1.0 / n_tx;
    CMatrix g = gram(h); // H H^H
    for (auto& v : g.data()) v *= inv_k;

    CMatrix whitened = g;
    for (int i = 0; i < n_rx; ++i) whitened(i, i) += sigma2;

    CMatrix snr_form = g;
    for (auto& v : snr_form.data()) v /= sigma2;
    for (int i = 0; i < n_rx; ++i) snr_form(i, i) += 1.0;

    const double logdet_term = Cholesky(snr_form).log_det() / n_tx;

    // Y = H X / sqrt(K) + sigma W
    CMatrix y = multiply(h, x);
    const double hscale = 1.0 / std::sqrt(static_cast<double>(n_tx));
    const double sigma = std::sqrt(sigma2);
    for (int i = 0; i < n_rx; ++i) {
        for (int t = 0; t < n; ++t) {
            y(i, t) = y(i, t) * hscale + sigma * w(i, t);
        }
    }

    const CMatrix z = Cholesky(whitened).solve(y);
    double trace_qyy = 0.0;
    for (size_t idx = 0; idx < y.data().size(); ++idx) {
        trace_qyy += std::real(std::conj(y.data()[idx]) * z.data()[idx]);
    }
    double trace_ww = 0.0;
    for (const auto& v : w.data()) trace_ww += std::norm(v);

    const double nk = static_cast<double>(n) * n_tx;
    const double value = logdet_term + (trace_qyy - trace_ww) / nk;

    // A = I - X X^H / n. For qpsk inputs tr X X^H = nK holds exactly, so the
    // trace is divided before subtracting to keep a = 0 exact.
    CMatrix xxh = gram(x);
    InputSpread spread;
    double tr_xxh = 0.0;
    for (int k = 0; k < n_tx; ++k) tr_xxh += xxh(k, k).real();
    spread.a = (n_tx - tr_xxh / n) / n_tx;
    double tr_a2 = 0.0;
    for (int i = 0; i < n_tx; ++i) {
        for (int j = 0; j < n_tx; ++j) {
            const cdouble aij = ((i == j) ? cdouble{1.0, 0.0} : cdouble{}) - xxh(i, j) / static_cast<double>(n);
            tr_a2 += std::norm(aij);
        }
    }
    spread.b = tr_a2 / n_tx;
    return {value, spread};
}

std::pair<double, InputSpread> sample_information_density(const TrialConfig& config,
                                                          long trial_index) {
    validate_config(config);
    if (trial_index < 0 || trial_index >= config.trials) {
        throw std::domain_error("trial_index out of range");
    }
    auto checked = [&](std::uint64_t attempt) {
        auto result = evaluate_draw(config, attempt, trial_index);
        if (!std::isfinite(result.first)) {
            throw DecompositionError("information density is not finite");
        }
        return result;
    };
    try {
        return checked(0);
    } catch (const DecompositionError&) {
        try {
            return checked(1);
        } catch (const DecompositionError& e) {
            throw SimulationError(std::string("degenerate draw after resample: ") + e.what(),
                                  trial_index);
        }
    }
}

int resolve_worker_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("FBL_MIMO_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

SampleSet run_trials(const TrialConfig& config, int workers) {
    validate_config(config);
    SampleSet out;
    out.config = config;
    out.values.resize(static_cast<size_t>(config.trials));
    out.spreads.resize(static_cast<size_t>(config.trials));

    const int n_workers = std::min<long>(resolve_worker_count(workers), config.trials);
    std::atomic<long> next{0};
    std::mutex error_mutex;
    long failed_trial = -1;
    std::string failure;

    auto body = [&]() {
        for (;;) {
            const long i = next.fetch_add(1);
            if (i >= config.trials) return;
            try {
                auto [value, spread] = sample_information_density(config, i);
                out.values[static_cast<size_t>(i)] = value;
                out.spreads[static_cast<size_t>(i)] = spread;
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (failed_trial < 0 || i < failed_trial) {
                    failed_trial = i;
                    failure = e.what();
                }
            }
        }
    };

    if (n_workers <= 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(n_workers));
        for (int t = 0; t < n_workers; ++t) pool.emplace_back(body);
        for (auto& th : pool) th.join();
    }
    if (failed_trial >= 0) {
        throw SimulationError(failure, failed_trial);
    }
    return out;
}

FeinsteinFit empirical_feinstein(const SampleSet& samples, double rate) {
    if (samples.values.empty()) throw std::domain_error("empty sample set");
    std::vector<double> sorted = samples.values;
    std::sort(sorted.begin(), sorted.end());
    const double nk = static_cast<double>(samples.config.geom.nk());
    const double inv_count = 1.0 / static_cast<double>(sorted.size());

    auto objective = [&](double delta) {
        const auto it = std::upper_bound(sorted.begin(), sorted.end(), rate + delta);
        const double cdf = static_cast<double>(it - sorted.begin()) * inv_count;
        return cdf + std::exp(-nk * delta);
    };

    constexpr int kGridPoints = 400;
    const double lo = 1e-6, hi = 10.0;
    const double step = std::log(hi / lo) / (kGridPoints - 1);
    int best_index = 0;
    double best_delta = lo;
    double best_value = objective(lo);
    for (int i = 1; i < kGridPoints; ++i) {
        const double delta = lo * std::exp(step * i);
        const double value = objective(delta);
        if (value < best_value) {
            best_value = value;
            best_delta = delta;
            best_index = i;
        }
    }

    // Golden-section refinement on the bracket around the best grid point.
    // The empirical objective jumps at every sample, so the best point seen
    // during the search is kept rather than the final midpoint.
    double a = lo * std::exp(step * std::max(0, best_index - 1));
    double b = lo * std::exp(step * std::min(kGridPoints - 1, best_index + 1));
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - ratio * (b - a);
    double x2 = a + ratio * (b - a);
    double f1 = objective(x1);
    double f2 = objective(x2);
    for (int iter = 0; iter < 80; ++iter) {
        if (f1 < best_value) { best_value = f1; best_delta = x1; }
        if (f2 < best_value) { best_value = f2; best_delta = x2; }
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = objective(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = objective(x2);
        }
    }
    return {best_delta, best_value};
}

double ks_distance_to_normal(std::vector<double> samples) {
    std::sort(samples.begin(), samples.end());
    const double count = static_cast<double>(samples.size());
    double ks = 0.0;
    for (size_t i = 0; i < samples.size(); ++i) {
        const double cdf = normal_cdf(samples[i]);
        ks = std::max(ks, std::max(cdf - static_cast<double>(i) / count,
                                   static_cast<double>(i + 1) / count - cdf));
    }
    return ks;
}

EmpiricalSummary clt_diagnostics(const SampleSet& samples, const SecondOrderStats& stats,
                                 CltMode mode) {
    if (samples.values.empty()) throw std::domain_error("empty sample set");
    const double sqrt_nk = std::sqrt(static_cast<double>(samples.config.geom.nk()));

    std::vector<double> z(samples.values.size());
    double scale_sum = 0.0;
    if (mode == CltMode::gaussian_input) {
        for (size_t i = 0; i < z.size(); ++i) {
            z[i] = sqrt_nk * (samples.values[i] - stats.capacity) / stats.theta_plus;
        }
        scale_sum = stats.theta_plus * static_cast<double>(z.size());
    } else {
        std::vector<long> offending;
        for (size_t i = 0; i < z.size(); ++i) {
            const ConstrainedTheta theta = theta_n_constrained(stats, samples.spreads[i]);
            if (!theta.positive_variance) {
                offending.push_back(static_cast<long>(i));
                continue;
            }
            scale_sum += theta.value;
            z[i] = sqrt_nk *
                   (samples.values[i] - stats.capacity + stats.zeta0 * samples.spreads[i].a) /
                   theta.value;
        }
        if (!offending.empty()) {
            std::string msg = "nonpositive theta_n^2 in trials:";
            for (size_t i = 0; i < offending.size() && i < 16; ++i) {
                msg += " " + std::to_string(offending[i]);
            }
            if (offending.size() > 16) msg += " ...";
            throw std::runtime_error(msg);
        }
    }

    EmpiricalSummary summary;
    double mean = 0.0;
    for (double v : z) mean += v;
    mean /= static_cast<double>(z.size());
    double var = 0.0;
    for (double v : z) var += (v - mean) * (v - mean);
    var /= static_cast<double>(z.size());

    summary.mean = mean;
    summary.std_dev = std::sqrt(var);
    summary.standardized_ks = ks_distance_to_normal(z);
    summary.reference_center = stats.capacity;
    summary.reference_scale = scale_sum / static_cast<double>(z.size());
    return summary;
}

std::string serialize_csv(const SampleSet& samples) {
    std::string out = "trial,I,a,b\n";
    char line[128];
    for (size_t i = 0; i < samples.values.size(); ++i) {
        std::snprintf(line, sizeof(line), "%zu,%.17g,%.17g,%.17g\n", i, samples.values[i],
                      samples.spreads[i].a, samples.spreads[i].b);
        out += line;
    }
    return out;
}

} // namespace fbl
