#include "fbl/mp_core.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace fbl {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::domain_error(std::string(name) + " must be positive and finite");
    }
}

// Gauss 7 / Kronrod 15 node-weight table on [-1, 1].
// Column 0: abscissa, column 1: Gauss-7 weight, column 2: Kronrod-15 weight.
constexpr double kG7K15[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0,               0.204432940075298},
    {0.586087235467691, 0.0,               0.169004726639267},
    {0.864864423359769, 0.0,               0.104790010322250},
    {0.991455371120813, 0.0,               0.022935322010529},
};

struct Panel {
    double a, b;
    double value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f0 = f(mid);
    double g7 = kG7K15[0][1] * f0;
    double k15 = kG7K15[0][2] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = half * kG7K15[i][0];
        const double fi = f(mid + dx) + f(mid - dx);
        g7 += kG7K15[i][1] * fi;
        k15 += kG7K15[i][2] * fi;
    }
    g7 *= half;
    k15 *= half;
    // QUADPACK-style inflation of the raw G7-K15 difference.
    double err = std::abs(k15 - g7);
    err = 200.0 * err * std::sqrt(std::max(err, 0.0));
    if (!std::isfinite(err) || err < std::abs(k15) * 1e-16) {
        err = std::abs(k15) * 1e-16;
    }
    return {a, b, k15, err};
}

} // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          const QuadratureSpec& spec) {
    if (spec.abs_tol <= 0.0 || spec.rel_tol <= 0.0 || spec.max_subdivisions < 1) {
        throw std::domain_error("QuadratureSpec requires positive tolerances and >= 1 subdivision");
    }
    if (a == b) return 0.0;

    std::priority_queue<Panel> panels;
    panels.push(evaluate_panel(f, a, b));
    double total = panels.top().value;
    double total_err = panels.top().error;

    for (int splits = 0; splits < spec.max_subdivisions; ++splits) {
        if (total_err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
            return total;
        }
        Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // Interval narrowed to machine resolution; accept its estimate.
            panels.push({worst.a, worst.b, worst.value, 0.0});
            total_err -= worst.error;
            continue;
        }
        Panel left = evaluate_panel(f, worst.a, mid);
        Panel right = evaluate_panel(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
    }
    if (total_err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
        return total;
    }
    throw ConvergenceError("adaptive quadrature did not converge within max_subdivisions",
                           total, total_err);
}

double delta0(const MpPoint& p) {
    require_positive(p.x, "x");
    require_positive(p.c, "c");
    const double lin = 1.0 - p.c + p.x;
    const double root = std::sqrt(lin * lin + 4.0 * p.c * p.x);
    // The naive (c-1)/(2x) - 1/2 + root/(2x) loses precision when the radical
    // nearly cancels the linear term (x >> 1). Multiply-conjugate rewrite:
    //   root - lin = 4cx / (root + lin),   valid whenever lin >= 0.
    if (lin >= 0.0) {
        return 2.0 * p.c / (lin + root);
    }
    return (root - lin) / (2.0 * p.x);
}

double delta0_prime(const MpPoint& p) {
    const double d = delta0(p);
    return -d * (1.0 + d) / (1.0 - p.c + p.x * (1.0 + 2.0 * d));
}

DeltaGammaTable delta_gamma_tables(double x, double base_noise, double c, int order) {
    require_positive(x, "x");
    require_positive(base_noise, "base_noise");
    require_positive(c, "c");
    if (order < 0) throw std::domain_error("order must be nonnegative");

    const double s2 = base_noise;
    const double d0x = delta0({x, c});
    const double d0s = delta0({s2, c});

    // delta_t at the base point is needed by the recursion at every x.
    std::vector<double> ds(static_cast<size_t>(order) + 1);
    ds[0] = d0s;
    const double denom_s = 1.0 - c + s2 * (1.0 + d0s) + s2 * d0s;
    const double denom_x = 1.0 - c + s2 * (1.0 + d0s) + x * d0x;
    if (!(denom_s > 0.0) || !(denom_x > 0.0)) {
        throw std::logic_error("delta_t recursion denominator is not positive");
    }
    for (int t = 1; t <= order; ++t) {
        double num = ds[t - 1] * (1.0 + d0s);
        for (int k = 1; k < t; ++k) {
            num += (ds[k - 1] - s2 * ds[k]) * ds[t - k];
        }
        ds[t] = num / denom_s;
    }

    DeltaGammaTable table;
    table.x = x;
    table.base_noise = s2;
    table.c = c;
    table.order = order;
    table.delta.resize(static_cast<size_t>(order) + 1);
    table.gamma.resize(static_cast<size_t>(order) + 1);
    table.delta[0] = d0x;
    table.gamma[0] = d0x / (1.0 + d0x);
    for (int t = 1; t <= order; ++t) {
        double num = table.delta[t - 1] * (1.0 + d0s);
        for (int k = 1; k < t; ++k) {
            num += (table.delta[k - 1] - s2 * table.delta[k]) * ds[t - k];
        }
        table.delta[t] = num / denom_x;
        table.gamma[t] = table.delta[t - 1] - s2 * table.delta[t];
    }
    return table;
}

double mp_measure_integral(const std::function<double(double)>& f, double c,
                           const QuadratureSpec& spec) {
    require_positive(c, "c");
    const double sc = std::sqrt(c);
    const double a = (1.0 - sc) * (1.0 - sc);
    const double b = (1.0 + sc) * (1.0 + sc);
    const double atom = std::max(0.0, 1.0 - 1.0 / c);

    // t = a + (b-a) sin^2(phi) removes the inverse-square-root endpoint
    // singularities; the transformed integrand is
    //   f(t) * (b-a)^2 sin^2(2 phi) / (4 pi c t)   on [0, pi/2].
    const double span = b - a;
    auto integrand = [&](double phi) {
        const double s = std::sin(phi);
        const double s2p = std::sin(2.0 * phi);
        const double t = a + span * s * s;
        return f(t) * span * span * s2p * s2p / (4.0 * M_PI * c * t);
    };
    const double cont = integrate_adaptive(integrand, 0.0, M_PI / 2.0, spec);
    return cont + (atom > 0.0 ? atom * f(0.0) : 0.0);
}

double tail_quadrature(const std::function<double(double)>& g, double lower,
                       const QuadratureSpec& spec) {
    require_positive(lower, "lower");
    // u = lower / v maps [lower, inf) onto (0, 1]; the Kronrod nodes are
    // interior so v = 0 is never evaluated.
    auto integrand = [&](double v) {
        const double u = lower / v;
        return g(u) * lower / (v * v);
    };
    return integrate_adaptive(integrand, 0.0, 1.0, spec);
}

} // namespace fbl
