#include <doctest.h>

#include <cmath>

#include "fbl/second_order.hpp"
#include "fbl/validate.hpp"

using namespace fbl;

TEST_CASE("capacity equals its tail-integral representation") {
    const double via_tail =
        tail_quadrature([](double u) { return 2.0 / u - delta0({u, 2.0}); }, 0.1);
    CHECK(std::abs(capacity(0.1, 2.0) - via_tail) < 1e-8);
    CHECK(capacity(0.1, 2.0) == doctest::Approx(2.780462093662594).epsilon(1e-13));
}

TEST_CASE("capacity scales like c / sigma^2 at low SNR") {
    CHECK(1e6 * capacity(1e6, 2.0) == doctest::Approx(2.0).epsilon(0.01));
    CHECK(1e6 * capacity(1e6, 0.5) == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("compute_stats reaches the high-SNR closed form") {
    // theta_+^2 -> -beta log(1-c) + 2c and theta_-^2 -> -beta log(1-c) + c
    const SecondOrderStats s = compute_stats(1e-10, 0.5, 16.0);
    CHECK(s.theta_plus * s.theta_plus ==
          doctest::Approx(-16.0 * std::log(0.5) + 1.0).epsilon(1e-4));
    CHECK(s.theta_minus * s.theta_minus ==
          doctest::Approx(-16.0 * std::log(0.5) + 0.5).epsilon(1e-4));
}

TEST_CASE("theta_plus strictly dominates theta_minus") {
    for (double c : standard_ratio_grid()) {
        for (double beta : {0.5, 4.0, 32.0}) {
            const SecondOrderStats s = compute_stats(0.3, c, beta);
            CHECK(s.theta_plus > s.theta_minus);
            CHECK(s.theta_minus > 0.0);
            CHECK(s.zeta0 > 0.0);
            CHECK(s.zeta2 > 0.0);
        }
    }
}

TEST_CASE("figure-level outage value from the stats bundle") {
    const SecondOrderStats s = compute_stats(0.1, 0.5, 10.0);
    const double p = normal_cdf(-1.0 / (s.theta_plus / std::sqrt(10.0)));
    CHECK(std::abs(p - 0.0859126) < 1e-5);
}

TEST_CASE("pe_bounds case split") {
    const SecondOrderStats s = compute_stats(0.1, 0.5, 10.0);
    const ErrorBounds at_zero = pe_bounds(0.0, s);
    CHECK(at_zero.lower == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(at_zero.upper == doctest::Approx(0.5).epsilon(1e-15));

    const ErrorBounds above = pe_bounds(2.0, s);
    CHECK(above.lower == 0.5);
    CHECK(above.upper > 0.5);

    const ErrorBounds below = pe_bounds(-1.0, s);
    CHECK(below.lower <= below.upper);
    CHECK(below.lower < 0.5);
}

TEST_CASE("pe and outage bounds agree through the rate mapping") {
    const double sigma2 = 0.1, c = 0.5, beta = 10.0;
    const SecondOrderStats s = compute_stats(sigma2, c, beta);
    const OutageBounds out = outage_bounds(-1.0, sigma2, c, beta);
    const ErrorBounds pe = pe_bounds(-1.0 * std::sqrt(beta), s);
    CHECK(out.upper == doctest::Approx(pe.upper).epsilon(1e-12));
}

TEST_CASE("outage bounds reproduce the reference operating points") {
    const double sigma2 = sigma2_from_snr_db(10.0);
    const OutageBounds half = outage_bounds(-1.0, sigma2, 0.5, 10.0);
    CHECK(std::abs(half.upper - 0.0859126) < 1e-5);
    CHECK(std::abs(half.lower - 0.0783881) < 1e-5);
    CHECK(std::abs(outage_bounds(-1.0, sigma2, 0.5, 1.0).limit - 0.0681) < 5e-4);
    CHECK(std::abs(outage_bounds(-1.0, sigma2, 1.0, 1.0).limit - 0.1258) < 5e-4);
    CHECK(std::abs(outage_bounds(-1.0, sigma2, 2.0, 1.0).limit - 0.0874) < 5e-4);
    CHECK(std::abs(outage_bounds(-1.0, sigma2, 1.0, 50.118723).upper - 0.130253) < 1e-5);
}

TEST_CASE("outage lower bound is capped at one half above capacity") {
    const OutageBounds b = outage_bounds(3.0, 0.1, 0.5, 10.0);
    CHECK(b.lower == 0.5);
    CHECK(b.upper > 0.5);
}

TEST_CASE("constrained theta reduces to theta_minus at zero spread") {
    const SecondOrderStats s = compute_stats(0.1, 2.0, 4.5);
    const ConstrainedTheta t = theta_n_constrained(s, {0.0, 0.0});
    CHECK(t.positive_variance);
    CHECK(t.value == doctest::Approx(s.theta_minus).epsilon(1e-14));

    const ConstrainedTheta widened = theta_n_constrained(s, {0.0, 0.5});
    CHECK(widened.value > s.theta_minus);
}

TEST_CASE("constrained theta radicand matches term-by-term re-evaluation") {
    // Re-derive every zeta from the delta/gamma tables, independently of
    // compute_stats, and reassemble the radicand.
    const double s2 = 0.1, c = 2.0, beta = 4.5;
    const SecondOrderStats s = compute_stats(s2, c, beta);

    const DeltaGammaTable base = delta_gamma_tables(s2, s2, c, 1);
    const double d0 = base.delta[0];
    const double d1 = base.delta[1];
    const double cubic = d0 * std::pow(1.0 + d0, 3);
    const double zeta2 = beta * d1 / std::pow(1.0 + d0, 4);
    const double head =
        -beta * (s2 * d1 * d1 + 2.0 * s2 / beta * d0 * (1.0 + d0) * d1) / cubic;
    const double tail = tail_quadrature(
        [&](double u) {
            const DeltaGammaTable t = delta_gamma_tables(u, s2, c, 2);
            return s2 * t.gamma[2] / (1.0 - c + u * (1.0 + 2.0 * t.delta[0]));
        },
        s2);
    const double zeta1_lin = head - beta * tail;
    const double num = d0 * d0 * d1 * d1 -
                       (d0 + s2 * d1) *
                           (-s2 * d1 * d1 * d1 + (1.0 + 2.0 * d0) * d1 * d1 - d0 * d0 * d1);
    const double zeta1_quad = beta * num / (cubic * cubic);

    const double expected = s.theta_minus * s.theta_minus + 0.5 * zeta1_lin +
                            0.25 * zeta1_quad + 0.5 * zeta2;
    const ConstrainedTheta t = theta_n_constrained(s, {0.5, 0.5});
    CHECK(t.radicand == doctest::Approx(expected).epsilon(1e-12));
    CHECK(t.radicand == doctest::Approx(3.111492745750408).epsilon(1e-10));
}

TEST_CASE("constrained theta flags a nonpositive radicand instead of faking one") {
    SecondOrderStats s = compute_stats(0.1, 2.0, 4.5);
    // Force the flag with an adversarial bundle: large negative linear term.
    s.zeta1_lin = -1e3;
    const ConstrainedTheta t = theta_n_constrained(s, {0.5, 0.25});
    CHECK_FALSE(t.positive_variance);
    CHECK(t.radicand < 0.0);
}

TEST_CASE("input spread validation") {
    const SecondOrderStats s = compute_stats(0.1, 2.0, 4.5);
    CHECK_THROWS_AS(theta_n_constrained(s, {1.5, 3.0}), std::domain_error);
    CHECK_THROWS_AS(theta_n_constrained(s, {0.5, 0.1}), std::domain_error); // b < a^2
}

TEST_CASE("asymptotic limits") {
    const SnrLimits c2 = asymptotic_limits(2.0, 16.0);
    CHECK(c2.high_snr_finite);
    CHECK(c2.high_snr_theta_minus_sq ==
          doctest::Approx(16.0 * std::log(2.0) + 1.0).epsilon(1e-12));
    CHECK(c2.high_snr_theta_plus_sq ==
          doctest::Approx(16.0 * std::log(2.0) + 2.0).epsilon(1e-12));

    CHECK_FALSE(asymptotic_limits(1.0, 7.0).high_snr_finite);

    const SnrLimits low = asymptotic_limits(0.5, 3.0);
    CHECK(low.low_snr_capacity_coeff == 0.5);
    CHECK(low.low_snr_theta_plus_sq_coeff == 1.0);
    CHECK(low.low_snr_theta_minus_sq_coeff == 1.0);
}

TEST_CASE("domain errors on nonpositive parameters") {
    CHECK_THROWS_AS(capacity(-0.1, 2.0), std::domain_error);
    CHECK_THROWS_AS(compute_stats(0.1, 2.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(outage_bounds(-1.0, 0.0, 2.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(asymptotic_limits(-2.0, 16.0), std::domain_error);
}

TEST_CASE("snr conversion convention") {
    CHECK(sigma2_from_snr_db(10.0) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(snr_db_from_sigma2(0.1) == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(sigma2_from_snr_db(-0.785) == doctest::Approx(1.198119123190034).epsilon(1e-14));
}
