#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fbl/second_order.hpp"

namespace fbl {

// Finite-n approximation of the achievability upper bound: optimized slack
// delta_star, the Gaussian and exponential terms, and their sum. The total may
// exceed 1; it is clamped only at reporting time, never here.
struct FiniteBound {
    double rate = 0.0;
    double delta_star = 0.0;
    double gaussian_term = 0.0;
    double exp_term = 0.0;
    double total = 0.0;
};

double delta_star(double rate, double cap, double theta_plus, long long n, long long tx);

FiniteBound finite_upper(double rate, const SystemGeometry& geom, double sigma2);

enum class SweepKind { snr, blocklength };

// One grid point of a sweep. Out-of-regime points carry an error string and
// empty payloads; the sweep continues past them.
struct SweepRow {
    double x = 0.0; // SNR in dB (snr sweep) or n/K (blocklength sweep)
    std::optional<FiniteBound> bound;
    std::optional<OutageBounds> outage; // blocklength sweeps only
    std::string error;
};

struct SweepParams {
    int rx = 0;
    int tx = 0;
    double rate = 0.0;
    double snr_db = 0.0;      // fixed SNR for blocklength sweeps
    int block_length = 0;     // fixed n for snr sweeps
};

// Grid must be nonempty and strictly increasing. Blocklength sweeps also emit
// the outage bounds and their limit at r = K*(rate - C).
std::vector<SweepRow> sweep(SweepKind kind, const std::vector<double>& grid,
                            const SweepParams& params);

} // namespace fbl
