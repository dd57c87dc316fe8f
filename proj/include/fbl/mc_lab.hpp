#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fbl/linalg.hpp"
#include "fbl/second_order.hpp"

namespace fbl {

enum class InputLaw { gaussian, qpsk };

struct TrialConfig {
    SystemGeometry geom;
    double sigma2 = 0.0;
    InputLaw input_law = InputLaw::gaussian;
    long trials = 0;
    std::uint64_t seed = 0;
};

struct SampleSet {
    TrialConfig config;
    std::vector<double> values;        // per-trial information density
    std::vector<InputSpread> spreads;  // per-trial (tr A / K, tr A^2 / K)
};

struct EmpiricalSummary {
    double mean = 0.0;             // of the standardized samples
    double std_dev = 0.0;          // of the standardized samples
    double standardized_ks = 0.0;  // KS distance of standardized samples to Phi
    double reference_center = 0.0; // C
    double reference_scale = 0.0;  // theta_+ or mean theta_n
};

struct FeinsteinFit {
    double delta_opt = 0.0;
    double value = 0.0;
};

enum class CltMode { gaussian_input, constrained_input };

// Information density of one realization (H: N x K, X: K x n, W: N x n):
//   (1/K) log det(I + H H^H / (sigma^2 K))
//     + (1/(nK)) [ tr(Q Y Y^H) - tr(W W^H) ],
// with Y = H X / sqrt(K) + sigma W and Q = (H H^H / K + sigma^2 I)^(-1).
// Q is applied through a Cholesky solve, never an explicit inverse.
// Exposed so tests can drive it with forced realizations.
std::pair<double, InputSpread> information_density(const CMatrix& h, const CMatrix& x,
                                                   const CMatrix& w, double sigma2);

// Draws (H, X, W) from the (seed, trial_index) substream and evaluates the
// information density. A numerically degenerate draw is resampled once from
// the designated retry substream, then reported as a SimulationError.
std::pair<double, InputSpread> sample_information_density(const TrialConfig& config,
                                                          long trial_index);

// Trials run on `workers` threads (0 = FBL_MIMO_THREADS env, else hardware).
// Results are index-addressed: the output is a pure function of the config.
SampleSet run_trials(const TrialConfig& config, int workers = 0);

int resolve_worker_count(int requested);

// inf over delta > 0 of  Pr_hat[I <= R + delta] + exp(-nK delta),
// via a 400-point log grid on [1e-6, 10] refined by golden-section search.
FeinsteinFit empirical_feinstein(const SampleSet& samples, double rate);

EmpiricalSummary clt_diagnostics(const SampleSet& samples, const SecondOrderStats& stats,
                                 CltMode mode);

// Kolmogorov-Smirnov distance of a sample against the standard normal.
double ks_distance_to_normal(std::vector<double> samples);

// CSV with header `trial,I,a,b`, 17 significant digits, '\n' line ends.
std::string serialize_csv(const SampleSet& samples);

} // namespace fbl
