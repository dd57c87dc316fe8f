#pragma once

#include "fbl/mp_core.hpp"

namespace fbl {

// Antenna counts and block length. c and beta are always derived from the
// integer triplet, never stored independently.
struct SystemGeometry {
    int rx = 0;           // N, receive antennas
    int tx = 0;           // K, transmit antennas
    int block_length = 0; // n, channel uses per fading block

    double c() const { return static_cast<double>(rx) / tx; }
    double beta() const { return static_cast<double>(block_length) / tx; }
    long long nk() const { return static_cast<long long>(block_length) * tx; }
};

SystemGeometry make_geometry(int rx, int tx, int block_length);

// Closed-form second-order bundle at one (sigma^2, c, beta) operating point.
// Rates are in nats per channel use per transmit antenna.
struct SecondOrderStats {
    double sigma2 = 0.0;
    double c = 0.0;
    double beta = 0.0;
    double capacity = 0.0;
    double theta_minus = 0.0;
    double theta_plus = 0.0;
    double zeta0 = 0.0;
    double zeta1_lin = 0.0;  // coefficient of a in zeta_1(a)
    double zeta1_quad = 0.0; // coefficient of a^2 in zeta_1(a)
    double zeta2 = 0.0;
};

struct ErrorBounds {
    double r = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

struct OutageBounds {
    double r = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double limit = 0.0; // beta -> infinity outage
};

// Normalized traces of A = I - (1/n) X X^H: a = tr(A)/K, b = tr(A^2)/K.
struct InputSpread {
    double a = 0.0;
    double b = 0.0;
};

// theta_n for energy-constrained inputs. When the radicand is nonpositive the
// outcome is flagged instead of producing a fake magnitude.
struct ConstrainedTheta {
    bool positive_variance = false;
    double value = 0.0;    // valid only when positive_variance
    double radicand = 0.0; // always reported
};

// High-SNR limits of theta_-^2 / theta_+^2 (infinite at c = 1) and the
// leading low-SNR coefficients of sigma^2*C, sigma^2*theta_+^2, sigma^2*theta_-^2.
struct SnrLimits {
    bool high_snr_finite = false;
    double high_snr_theta_minus_sq = 0.0;
    double high_snr_theta_plus_sq = 0.0;
    double low_snr_capacity_coeff = 0.0;
    double low_snr_theta_plus_sq_coeff = 0.0;
    double low_snr_theta_minus_sq_coeff = 0.0;
};

// Standard normal distribution function, via erfc in double precision.
double normal_cdf(double z);

// SNR convention used across the toolkit: SNR_dB = -10 log10(sigma^2).
double sigma2_from_snr_db(double snr_db);
double snr_db_from_sigma2(double sigma2);

// Per-antenna ergodic capacity C(sigma^2, c) in nats.
double capacity(double sigma2, double c);

SecondOrderStats compute_stats(double sigma2, double c, double beta,
                               const QuadratureSpec& spec = {});

ErrorBounds pe_bounds(double r, const SecondOrderStats& stats);

OutageBounds outage_bounds(double r, double sigma2, double c, double beta);

ConstrainedTheta theta_n_constrained(const SecondOrderStats& stats, const InputSpread& spread);

SnrLimits asymptotic_limits(double c, double beta);

} // namespace fbl
