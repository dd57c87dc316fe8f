#pragma once

#include <string>
#include <vector>

namespace fbl {

// Test-only hook: adds a constant offset to delta0 inside the closed-form
// identity residuals, so the suite's sensitivity is itself testable.
struct FaultInjection {
    double delta0_perturb = 0.0;
};

struct IdentityResult {
    std::string name;
    double worst = 0.0;     // worst residual (or margin deficit) over the grid
    double tolerance = 0.0;
    bool pass = false;
};

// Standard evaluation grid: c in {0.1, 0.5, 1, 2, 10} x 25 log-spaced
// arguments in [1e-3, 1e3].
std::vector<double> standard_ratio_grid();
std::vector<double> standard_argument_grid();

// Runs every analytic identity of the spectral and second-order layers.
// Each result carries the worst residual seen and its tolerance.
std::vector<IdentityResult> run_identity_suite(const FaultInjection& fault = {});

} // namespace fbl
