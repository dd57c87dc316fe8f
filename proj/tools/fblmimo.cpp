#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fbl/finite_blocklength.hpp"
#include "fbl/mc_lab.hpp"
#include "fbl/second_order.hpp"
#include "fbl/validate.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";

using json = nlohmann::ordered_json;

// Exit codes are part of the public contract.
enum ExitCode { kOk = 0, kValidationFail = 1, kUsage = 2, kNumeric = 3, kSimulation = 4 };

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << contents;
    if (!out) throw std::runtime_error("failed writing output file: " + path);
}

void write_manifest(const std::string& out_path, const std::string& command,
                    const json& parameters, double duration_seconds) {
    json manifest;
    manifest["command"] = command;
    manifest["parameters"] = parameters;
    manifest["tool_version"] = kVersion;
    manifest["duration_seconds"] = duration_seconds;
    write_file(out_path + ".manifest.json", manifest.dump(2) + "\n");
}

struct BoundsArgs {
    double snr_db = 0.0, c = 0.0, beta = 0.0, r = 0.0;
};

int run_bounds(const BoundsArgs& args) {
    const double sigma2 = fbl::sigma2_from_snr_db(args.snr_db);
    const fbl::SecondOrderStats stats = fbl::compute_stats(sigma2, args.c, args.beta);
    const fbl::ErrorBounds pe = fbl::pe_bounds(args.r, stats);

    json out;
    out["capacity"] = stats.capacity;
    out["theta_minus"] = stats.theta_minus;
    out["theta_plus"] = stats.theta_plus;
    out["zeta0"] = stats.zeta0;
    out["zeta1_lin"] = stats.zeta1_lin;
    out["zeta1_quad"] = stats.zeta1_quad;
    out["zeta2"] = stats.zeta2;
    out["pe_lower"] = pe.lower;
    out["pe_upper"] = pe.upper;
    std::cout << out.dump(2) << "\n";
    return kOk;
}

struct SweepArgs {
    int figure = 0;
    std::string kind;
    int rx = 0, tx = 0, block_length = 0;
    double rate = 0.0, snr_db = 0.0;
    double grid_from = 0.0, grid_to = 0.0;
    int grid_points = 0;
    std::string out_path;
};

std::vector<double> linear_grid(double from, double to, int points) {
    std::vector<double> grid;
    grid.reserve(static_cast<size_t>(points));
    if (points == 1) {
        grid.push_back(from);
        return grid;
    }
    for (int i = 0; i < points; ++i) {
        grid.push_back(from + (to - from) * i / (points - 1));
    }
    return grid;
}

std::string blocklength_csv(const std::vector<fbl::SweepRow>& rows) {
    std::string csv = "n_over_K,finite_bound,out_upper,out_lower,out_limit,error\n";
    for (const auto& row : rows) {
        csv += format_double(row.x);
        csv += ',';
        csv += row.bound ? format_double(row.bound->total) : "";
        csv += ',';
        csv += row.outage ? format_double(row.outage->upper) : "";
        csv += ',';
        csv += row.outage ? format_double(row.outage->lower) : "";
        csv += ',';
        csv += row.outage ? format_double(row.outage->limit) : "";
        csv += ',';
        csv += row.error;
        csv += '\n';
    }
    return csv;
}

int run_sweep(const SweepArgs& args) {
    std::string csv;
    bool any_row_ok = false;

    if (args.figure == 3) {
        const double sigma2 = fbl::sigma2_from_snr_db(10.0);
        const double r = -1.0;
        csv = "c,beta,upper,lower,limit\n";
        for (double c : {0.5, 1.0, 2.0}) {
            for (int i = 0; i <= 20; ++i) {
                const double beta = std::pow(10.0, i / 10.0);
                const fbl::OutageBounds b = fbl::outage_bounds(r, sigma2, c, beta);
                csv += format_double(c) + "," + format_double(beta) + "," +
                       format_double(b.upper) + "," + format_double(b.lower) + "," +
                       format_double(b.limit) + "\n";
            }
        }
        any_row_ok = true;
    } else if (args.figure == 4) {
        fbl::SweepParams params;
        params.rx = 16;
        params.tx = 8;
        params.rate = std::log(2.0);
        csv = "n,snr_db,bound,error\n";
        const std::vector<double> grid = linear_grid(-6.0, 6.0, 121);
        for (int n : {36, 144}) {
            params.block_length = n;
            for (const auto& row : fbl::sweep(fbl::SweepKind::snr, grid, params)) {
                csv += std::to_string(n) + "," + format_double(row.x) + ",";
                csv += row.bound ? format_double(row.bound->total) : "";
                csv += "," + row.error + "\n";
                any_row_ok = any_row_ok || row.bound.has_value();
            }
        }
    } else if (args.figure == 5) {
        fbl::SweepParams params;
        params.rx = 16;
        params.tx = 8;
        params.rate = std::log(2.0);
        params.snr_db = -0.785;
        const std::vector<double> grid = linear_grid(1.0, 32.0, 125);
        const auto rows = fbl::sweep(fbl::SweepKind::blocklength, grid, params);
        csv = blocklength_csv(rows);
        for (const auto& row : rows) any_row_ok = any_row_ok || row.bound.has_value();
    } else {
        fbl::SweepParams params;
        params.rx = args.rx;
        params.tx = args.tx;
        params.rate = args.rate;
        const std::vector<double> grid = linear_grid(args.grid_from, args.grid_to, args.grid_points);
        if (args.kind == "snr") {
            params.block_length = args.block_length;
            csv = "snr_db,bound,error\n";
            for (const auto& row : fbl::sweep(fbl::SweepKind::snr, grid, params)) {
                csv += format_double(row.x) + ",";
                csv += row.bound ? format_double(row.bound->total) : "";
                csv += "," + row.error + "\n";
                any_row_ok = any_row_ok || row.bound.has_value();
            }
        } else {
            params.snr_db = args.snr_db;
            const auto rows = fbl::sweep(fbl::SweepKind::blocklength, grid, params);
            csv = blocklength_csv(rows);
            for (const auto& row : rows) any_row_ok = any_row_ok || row.bound.has_value();
        }
    }

    write_file(args.out_path, csv);
    return any_row_ok ? kOk : kNumeric;
}

struct SimulateArgs {
    int rx = 0, tx = 0, block_length = 0;
    double snr_db = 0.0, rate = 0.0;
    long trials = 0;
    std::uint64_t seed = 0;
    std::string input = "gaussian";
    int threads = 0;
    std::string out_path;
};

int run_simulate(const SimulateArgs& args) {
    fbl::TrialConfig config;
    config.geom = fbl::make_geometry(args.rx, args.tx, args.block_length);
    config.sigma2 = fbl::sigma2_from_snr_db(args.snr_db);
    config.input_law = args.input == "qpsk" ? fbl::InputLaw::qpsk : fbl::InputLaw::gaussian;
    config.trials = args.trials;
    config.seed = args.seed;

    const fbl::SampleSet samples = fbl::run_trials(config, args.threads);
    write_file(args.out_path, fbl::serialize_csv(samples));

    const fbl::SecondOrderStats stats =
        fbl::compute_stats(config.sigma2, config.geom.c(), config.geom.beta());
    const fbl::CltMode mode = config.input_law == fbl::InputLaw::qpsk
                                  ? fbl::CltMode::constrained_input
                                  : fbl::CltMode::gaussian_input;
    const fbl::EmpiricalSummary summary = fbl::clt_diagnostics(samples, stats, mode);
    const fbl::FeinsteinFit feinstein = fbl::empirical_feinstein(samples, args.rate);

    json out;
    out["mean"] = summary.mean;
    out["std"] = summary.std_dev;
    out["ks"] = summary.standardized_ks;
    out["theoretical_C"] = stats.capacity;
    out["theoretical_theta"] = summary.reference_scale;
    out["empirical_feinstein"] = {{"delta", feinstein.delta_opt}, {"value", feinstein.value}};
    try {
        const fbl::FiniteBound bound = fbl::finite_upper(args.rate, config.geom, config.sigma2);
        out["theorem2_bound"] = bound.total;
        out["theorem2_error"] = "";
    } catch (const fbl::OutOfRegimeError& e) {
        out["theorem2_bound"] = nullptr;
        out["theorem2_error"] = e.what();
    }
    std::cout << out.dump(2) << "\n";
    return kOk;
}

struct ValidateArgs {
    double fault_delta0 = 0.0;
};

int run_validate(const ValidateArgs& args) {
    fbl::FaultInjection fault;
    fault.delta0_perturb = args.fault_delta0;
    const auto results = fbl::run_identity_suite(fault);
    bool all_pass = true;
    for (const auto& r : results) {
        std::printf("%s %-36s worst=%.3e tol=%.1e\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.worst, r.tolerance);
        all_pass = all_pass && r.pass;
    }
    std::printf("%zu identities, %s\n", results.size(), all_pass ? "all passed" : "FAILURES above");
    return all_pass ? kOk : kValidationFail;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Second-order and finite-blocklength performance bounds for the MIMO "
                 "Rayleigh block-fading channel"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    BoundsArgs bounds_args;
    CLI::App* bounds = app.add_subcommand("bounds", "Closed-form second-order statistics and "
                                                    "error-probability bounds as JSON");
    bounds->add_option("--snr-db", bounds_args.snr_db, "SNR in dB (SNR = 1/sigma^2)")->required();
    bounds->add_option("--c", bounds_args.c, "antenna ratio N/K")->required();
    bounds->add_option("--beta", bounds_args.beta, "blocklength ratio n/K")->required();
    bounds->add_option("--r", bounds_args.r, "second-order rate (nats, sqrt(nK) scale)")->required();

    SweepArgs sweep_args;
    CLI::App* sweep = app.add_subcommand("sweep", "Figure-style parameter sweeps to CSV");
    auto* fig = sweep->add_option("--figure", sweep_args.figure, "preset sweep: 3, 4 or 5")
                    ->check(CLI::IsMember({3, 4, 5}));
    sweep->add_option("--kind", sweep_args.kind, "custom sweep kind")
        ->check(CLI::IsMember({"snr", "blocklength"}))
        ->excludes(fig);
    sweep->add_option("--nn", sweep_args.rx, "receive antennas N");
    sweep->add_option("--k", sweep_args.tx, "transmit antennas K");
    sweep->add_option("--n", sweep_args.block_length, "block length n (snr sweeps)");
    sweep->add_option("--rate", sweep_args.rate, "code rate R in nats per channel use per antenna");
    sweep->add_option("--snr-db", sweep_args.snr_db, "fixed SNR (blocklength sweeps)");
    sweep->add_option("--grid-from", sweep_args.grid_from, "first grid point");
    sweep->add_option("--grid-to", sweep_args.grid_to, "last grid point");
    sweep->add_option("--grid-points", sweep_args.grid_points, "grid size")
        ->check(CLI::PositiveNumber);
    sweep->add_option("--out", sweep_args.out_path, "output CSV path")->required();

    SimulateArgs sim_args;
    CLI::App* simulate = app.add_subcommand("simulate", "Seeded Monte Carlo sampling of the "
                                                        "information density");
    simulate->add_option("--nn", sim_args.rx, "receive antennas N")->required();
    simulate->add_option("--k", sim_args.tx, "transmit antennas K")->required();
    simulate->add_option("--n", sim_args.block_length, "block length n")->required();
    simulate->add_option("--snr-db", sim_args.snr_db, "SNR in dB")->required();
    simulate->add_option("--trials", sim_args.trials, "number of trials")->required();
    simulate->add_option("--seed", sim_args.seed, "64-bit seed")->required();
    simulate->add_option("--input", sim_args.input, "input law")
        ->check(CLI::IsMember({"gaussian", "qpsk"}));
    simulate->add_option("--rate", sim_args.rate, "code rate R in nats")->required();
    simulate->add_option("--threads", sim_args.threads, "worker count (0 = auto/FBL_MIMO_THREADS)");
    simulate->add_option("--out", sim_args.out_path, "output CSV path")->required();

    ValidateArgs validate_args;
    CLI::App* validate = app.add_subcommand("validate", "Run the analytic identity suites");
    validate->add_option("--fault-delta0", validate_args.fault_delta0,
                         "test hook: perturb delta0 inside the identity residuals")
        ->group(""); // hidden

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    const auto start = std::chrono::steady_clock::now();
    try {
        int code = kOk;
        if (bounds->parsed()) {
            code = run_bounds(bounds_args);
        } else if (sweep->parsed()) {
            if (sweep_args.figure == 0) {
                if (sweep_args.kind.empty() || sweep_args.grid_points < 1) {
                    std::cerr << "sweep: either --figure or --kind with a grid is required\n";
                    return kUsage;
                }
            }
            code = run_sweep(sweep_args);
            if (code == kOk) {
                const double secs =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                json params;
                params["figure"] = sweep_args.figure;
                params["kind"] = sweep_args.kind;
                params["nn"] = sweep_args.rx;
                params["k"] = sweep_args.tx;
                params["n"] = sweep_args.block_length;
                params["rate"] = sweep_args.rate;
                params["snr_db"] = sweep_args.snr_db;
                params["grid_from"] = sweep_args.grid_from;
                params["grid_to"] = sweep_args.grid_to;
                params["grid_points"] = sweep_args.grid_points;
                write_manifest(sweep_args.out_path, "sweep", params, secs);
            }
        } else if (simulate->parsed()) {
            code = run_simulate(sim_args);
            if (code == kOk) {
                const double secs =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                json params;
                params["nn"] = sim_args.rx;
                params["k"] = sim_args.tx;
                params["n"] = sim_args.block_length;
                params["snr_db"] = sim_args.snr_db;
                params["trials"] = sim_args.trials;
                params["seed"] = sim_args.seed;
                params["input"] = sim_args.input;
                params["rate"] = sim_args.rate;
                params["threads"] = sim_args.threads;
                write_manifest(sim_args.out_path, "simulate", params, secs);
            }
        } else if (validate->parsed()) {
            code = run_validate(validate_args);
        }
        return code;
    } catch (const fbl::SimulationError& e) {
        std::cerr << "simulation failed at trial " << e.trial_index() << ": " << e.what() << "\n";
        return kSimulation;
    } catch (const fbl::ConvergenceError& e) {
        std::cerr << "numeric failure: " << e.what() << " (best estimate " << e.best_estimate()
                  << ")\n";
        return kNumeric;
    } catch (const fbl::OutOfRegimeError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumeric;
    }
}
