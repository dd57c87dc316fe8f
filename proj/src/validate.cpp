#include "fbl/validate.hpp"

#include <cmath>

#include "fbl/mp_core.hpp"
#include "fbl/philox.hpp"
#include "fbl/second_order.hpp"

namespace fbl {

namespace {

struct Residual {
    double worst = 0.0;
    void note(double v) { worst = std::max(worst, std::abs(v)); }
    // For strict inequalities: records how far the margin dips below zero.
    void note_margin(double margin) { worst = std::max(worst, std::max(0.0, -margin)); }
};

IdentityResult finish(std::string name, const Residual& r, double tol) {
    return {std::move(name), r.worst, tol, r.worst < tol};
}

} // namespace

std::vector<double> standard_ratio_grid() {
    return {0.1, 0.5, 1.0, 2.0, 10.0};
}

std::vector<double> standard_argument_grid() {
    std::vector<double> xs;
    xs.reserve(25);
    for (int i = 0; i < 25; ++i) {
        xs.push_back(std::pow(10.0, -3.0 + 6.0 * i / 24.0));
    }
    return xs;
}

std::vector<IdentityResult> run_identity_suite(const FaultInjection& fault) {
    const std::vector<double> cs = standard_ratio_grid();
    const std::vector<double> xs = standard_argument_grid();
    std::vector<IdentityResult> results;

    // Residuals whose natural terms grow like delta0 (up to ~1e4 on this
    // grid) are scale-normalized; an absolute tolerance there would measure
    // double rounding, not the identity.
    Residual quad, prop3, prop4, prop5, prop6, sandwich, deriv_link, gamma_dual;
    for (double c : cs) {
        for (double x : xs) {
            const double d0 = delta0({x, c}) + fault.delta0_perturb;
            const double d0p = delta0_prime({x, c});
            quad.note(x * d0 * d0 + (1.0 - c + x) * d0 - c);
            prop3.note((d0 * (1.0 - c + x * (1.0 + d0)) - c) / c);
            prop4.note(d0 / (1.0 + d0) - (c - x * d0));
            prop5.note(1.0 / (1.0 + d0) - (1.0 - c + x * d0));
            // Implicit differentiation of the defining quadratic.
            prop6.note((d0 * d0 + d0 + d0p * (2.0 * x * d0 + 1.0 - c + x)) /
                       ((1.0 + d0) * (1.0 + d0)));
            sandwich.note_margin(d0 - c / ((1.0 + std::sqrt(c)) * (1.0 + std::sqrt(c)) + x));
            sandwich.note_margin(c / x - d0);

            const DeltaGammaTable table = delta_gamma_tables(x, x, c, 1);
            deriv_link.note((table.delta[1] + delta0_prime({x, c})) /
                            std::max(1.0, std::abs(delta0_prime({x, c}))));
            gamma_dual.note(table.gamma[0] - (c - x * table.delta[0]));
        }
    }
    results.push_back(finish("quadratic-residual", quad, 1e-10));
    results.push_back(finish("property-iii-fixed-point", prop3, 1e-10));
    results.push_back(finish("property-iv-trace-ratio", prop4, 1e-10));
    results.push_back(finish("property-v-reciprocal", prop5, 1e-12));
    results.push_back(finish("property-vi-derivative", prop6, 1e-10));
    results.push_back(finish("property-i-ii-sandwich", sandwich, 1e-15));
    results.push_back(finish("delta1-matches-minus-delta0-prime", deriv_link, 1e-10));
    results.push_back(finish("gamma0-dual-form", gamma_dual, 1e-10));

    // Stieltjes transform against the measure oracle at 10 grid points chosen
    // by a fixed-seed draw over the full grid.
    {
        Residual stieltjes;
        TrialStream picker(0x57135u, 0);
        for (int k = 0; k < 10; ++k) {
            const double c = cs[picker.next_word() % cs.size()];
            const double x = xs[picker.next_word() % xs.size()];
            const double via_measure =
                mp_measure_integral([&](double t) { return 1.0 / (t + x); }, c);
            stieltjes.note(delta0({x, c}) / c - via_measure);
        }
        results.push_back(finish("stieltjes-transform-oracle", stieltjes, 1e-6));
    }

    // theta_+^2 - theta_-^2 against the measure form of the gap, plus its
    // positivity; beta cancels in the difference.
    {
        Residual gap_residual, gap_positive;
        for (double c : cs) {
            for (double s2 : xs) {
                const double d0 = delta0({s2, c});
                const double d0p = delta0_prime({s2, c});
                const double gap = c - 2.0 * s2 * d0 - s2 * s2 * d0p;
                const double via_measure = c * mp_measure_integral(
                    [&](double t) { return t * t / ((t + s2) * (t + s2)); }, c);
                gap_residual.note(gap - via_measure);
                gap_positive.note_margin(gap);
            }
        }
        results.push_back(finish("tightness-gap-integral", gap_residual, 1e-6));
        results.push_back(finish("tightness-gap-positive", gap_positive, 1e-15));
    }

    // Capacity and log-variance terms against their tail-integral forms.
    {
        Residual cap_identity, log_identity;
        for (double s2 : {0.1, 1.0}) {
            for (double c : {0.5, 2.0}) {
                const double via_tail = tail_quadrature(
                    [&](double u) { return c / u - delta0({u, c}); }, s2);
                cap_identity.note(capacity(s2, c) - via_tail);

                const double d0 = delta0({s2, c});
                const double ratio = d0 / (1.0 + d0);
                const double log_term = -std::log1p(-ratio * ratio / c);
                const double via_tail2 = tail_quadrature(
                    [&](double u) {
                        const DeltaGammaTable t = delta_gamma_tables(u, s2, c, 1);
                        return (t.delta[0] - s2 * t.delta[1]) /
                               (1.0 - c + u * (1.0 + 2.0 * t.delta[0]));
                    },
                    s2);
                log_identity.note(log_term - via_tail2);
            }
        }
        results.push_back(finish("capacity-tail-integral", cap_identity, 1e-8));
        results.push_back(finish("log-term-tail-integral", log_identity, 1e-8));
    }

    // Bound monotonicity in r on the negative axis.
    {
        Residual mono;
        const SecondOrderStats stats = compute_stats(0.1, 0.5, 10.0);
        double prev_lower = 0.0, prev_upper = 0.0;
        bool first = true;
        for (double r = -6.0; r < 0.0; r += 0.1) {
            const ErrorBounds b = pe_bounds(r, stats);
            if (!first) {
                mono.note_margin(b.lower - prev_lower);
                mono.note_margin(b.upper - prev_upper);
            }
            prev_lower = b.lower;
            prev_upper = b.upper;
            first = false;
        }
        results.push_back(finish("pe-bound-monotone-in-r", mono, 1e-15));
    }

    // Outage and error bounds agree at the argument level:
    // theta_+^out * sqrt(beta) = theta_+.
    {
        Residual args;
        for (double c : cs) {
            for (double beta : {2.0, 10.0, 50.0}) {
                const double s2 = 0.1;
                const SecondOrderStats stats = compute_stats(s2, c, beta);
                const double r_out = -1.0;
                const OutageBounds out = outage_bounds(r_out, s2, c, beta);
                const ErrorBounds err = pe_bounds(r_out * std::sqrt(beta), stats);
                args.note((out.upper - err.upper) / err.upper);
            }
        }
        results.push_back(finish("outage-error-scaling-consistency", args, 1e-12));
    }

    // zeta_1(a) -> 0 as a -> 0.
    {
        Residual vanish;
        const SecondOrderStats stats = compute_stats(0.1, 2.0, 4.5);
        const double a = 1e-8;
        const double zeta1 = stats.zeta1_lin * a + stats.zeta1_quad * a * a;
        const double budget =
            1e-6 * (std::abs(stats.zeta1_lin) + std::abs(stats.zeta1_quad)) + 1e-12;
        vanish.note_margin(budget - std::abs(zeta1));
        results.push_back(finish("zeta1-vanishes-at-zero", vanish, 1e-15));
    }

    return results;
}

} // namespace fbl
