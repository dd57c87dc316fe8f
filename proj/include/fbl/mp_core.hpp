#pragma once

#include <functional>
#include <vector>

#include "fbl/errors.hpp"

namespace fbl {

// Spectral argument / aspect-ratio pair for the Marchenko-Pastur functionals.
// x is the noise-like argument (u >= 0 region of the resolvent), c = N/K.
struct MpPoint {
    double x;
    double c;
};

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_subdivisions = 2000;
};

// delta_0(x) ... delta_T(x) and gamma_0(x) ... gamma_T(x) evaluated at one
// argument x, with the recursion anchored at base noise power sigma^2.
struct DeltaGammaTable {
    double x = 0.0;
    double base_noise = 0.0;
    double c = 0.0;
    int order = 0;
    std::vector<double> delta;
    std::vector<double> gamma;
};

// Positive root of x*d^2 + (1-c+x)*d - c = 0, evaluated in a
// cancellation-safe form (conjugate rewrite for 1-c+x >= 0).
double delta0(const MpPoint& p);

// d/dx delta0(x) = -delta0(1+delta0) / (1-c+x(1+2*delta0)); strictly negative.
double delta0_prime(const MpPoint& p);

DeltaGammaTable delta_gamma_tables(double x, double base_noise, double c, int order);

// Integral of f against the Marchenko-Pastur measure with ratio c:
// density sqrt((b-t)(t-a)) / (2 pi c t) on [a,b], a=(1-sqrt(c))^2,
// b=(1+sqrt(c))^2, plus an atom at 0 of mass max(0, 1-1/c).
double mp_measure_integral(const std::function<double(double)>& f, double c,
                           const QuadratureSpec& spec = {});

// Integral of g over [lower, infinity) via the substitution u = lower/v.
// g must decay at least like u^-2; otherwise the subdivision budget runs out
// and a ConvergenceError carrying the best estimate is thrown.
double tail_quadrature(const std::function<double(double)>& g, double lower,
                       const QuadratureSpec& spec = {});

// Globally adaptive Gauss-Kronrod (G7/K15) on a finite interval. Exposed
// because second_order reuses it for figure-grade integrals.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          const QuadratureSpec& spec = {});

} // namespace fbl
