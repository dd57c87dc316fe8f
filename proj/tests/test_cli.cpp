#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

fs::path work_dir() {
    static const fs::path dir = [] {
        fs::path p = fs::temp_directory_path() / "fblmimo_cli_tests";
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

RunResult run_cli(const std::string& args, const std::string& env = "") {
    const fs::path out_file = work_dir() / "stdout.txt";
    const std::string cmd =
        env + std::string(FBLMIMO_BIN) + " " + args + " > " + out_file.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    RunResult result;
    result.exit_code = WEXITSTATUS(status);
    std::ifstream in(out_file, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    result.out = buf.str();
    return result;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("bounds emits the full schema at r = 0") {
    const RunResult r = run_cli("bounds --snr-db 10 --c 0.5 --beta 10 --r 0");
    REQUIRE(r.exit_code == 0);
    const auto json = nlohmann::json::parse(r.out);
    for (const char* key : {"capacity", "theta_minus", "theta_plus", "zeta0", "zeta1_lin",
                            "zeta1_quad", "zeta2", "pe_lower", "pe_upper"}) {
        CHECK(json.contains(key));
    }
    CHECK(json["pe_lower"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(json["pe_upper"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("bounds reproduces the outage-mapped reference point") {
    const RunResult r = run_cli("bounds --snr-db 10 --c 0.5 --beta 10 --r -3.16227766016838");
    REQUIRE(r.exit_code == 0);
    const auto json = nlohmann::json::parse(r.out);
    CHECK(std::abs(json["pe_upper"].get<double>() - 0.0859126) < 1e-5);
}

TEST_CASE("bounds without a required flag exits 2 with no partial output") {
    const RunResult r = run_cli("bounds --snr-db 10 --beta 10 --r 0");
    CHECK(r.exit_code == 2);
    CHECK(r.out.empty());
}

TEST_CASE("figure 3 sweep hits the tabulated row") {
    const fs::path out = work_dir() / "fig3.csv";
    const RunResult r = run_cli("sweep --figure 3 --out " + out.string());
    REQUIRE(r.exit_code == 0);
    std::ifstream in(out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "c,beta,upper,lower,limit");
    bool found = false;
    while (std::getline(in, line)) {
        double c, beta, upper, lower, limit;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &c, &beta, &upper, &lower, &limit) == 5) {
            if (std::abs(c - 1.0) < 1e-12 && std::abs(beta - 50.118723) < 1e-4) {
                CHECK(std::abs(upper - 0.130253) < 1e-5);
                found = true;
            }
        }
    }
    CHECK(found);
    CHECK(fs::exists(out.string() + ".manifest.json"));
}

TEST_CASE("figure 4 sweep hits the tabulated row") {
    const fs::path out = work_dir() / "fig4.csv";
    const RunResult r = run_cli("sweep --figure 4 --out " + out.string());
    REQUIRE(r.exit_code == 0);
    std::ifstream in(out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "n,snr_db,bound,error");
    bool found = false;
    while (std::getline(in, line)) {
        int n;
        double snr, bound;
        if (std::sscanf(line.c_str(), "%d,%lf,%lf", &n, &snr, &bound) == 3) {
            if (n == 144 && std::abs(snr) < 1e-9) {
                CHECK(bound == doctest::Approx(3.83389e-06).epsilon(1e-3));
                found = true;
            }
        }
    }
    CHECK(found);
}

TEST_CASE("custom single-point sweep emits exactly one data row") {
    const fs::path out = work_dir() / "single.csv";
    const RunResult r = run_cli(
        "sweep --kind snr --nn 16 --k 8 --n 36 --rate 0.6931471805599453 "
        "--grid-from 0 --grid-to 0 --grid-points 1 --out " +
        out.string());
    REQUIRE(r.exit_code == 0);
    std::istringstream in(slurp(out));
    std::string line;
    int rows = 0;
    std::getline(in, line);
    CHECK(line == "snr_db,bound,error");
    while (std::getline(in, line)) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == 1);
}

TEST_CASE("simulate is byte-identical across reruns and worker counts") {
    const fs::path out1 = work_dir() / "sim1.csv";
    const fs::path out2 = work_dir() / "sim2.csv";
    const fs::path out4 = work_dir() / "sim4.csv";
    const std::string base =
        "simulate --nn 4 --k 2 --n 8 --snr-db 5 --trials 100 --seed 7 "
        "--rate 0.693 --input gaussian";
    const RunResult r1 = run_cli(base + " --threads 1 --out " + out1.string());
    const RunResult r2 = run_cli(base + " --threads 1 --out " + out2.string());
    const RunResult r4 = run_cli(base + " --threads 4 --out " + out4.string());
    REQUIRE(r1.exit_code == 0);
    REQUIRE(r2.exit_code == 0);
    REQUIRE(r4.exit_code == 0);
    CHECK(slurp(out1) == slurp(out2));
    CHECK(slurp(out1) == slurp(out4));
    CHECK(r1.out == r2.out);
    CHECK(r1.out == r4.out);
    CHECK(fs::exists(out1.string() + ".manifest.json"));
}

TEST_CASE("FBL_MIMO_THREADS env var is honored without changing results") {
    const fs::path out_env = work_dir() / "sim_env.csv";
    const fs::path out_ref = work_dir() / "sim_ref.csv";
    const std::string base =
        "simulate --nn 4 --k 2 --n 8 --snr-db 5 --trials 50 --seed 3 "
        "--rate 0.693 --input gaussian";
    const RunResult re = run_cli(base + " --out " + out_env.string(), "FBL_MIMO_THREADS=3 ");
    const RunResult rr = run_cli(base + " --threads 1 --out " + out_ref.string());
    REQUIRE(re.exit_code == 0);
    REQUIRE(rr.exit_code == 0);
    CHECK(slurp(out_env) == slurp(out_ref));
}

TEST_CASE("qpsk simulation reports zero trace deviation in every row") {
    const fs::path out = work_dir() / "qpsk.csv";
    const RunResult r = run_cli(
        "simulate --nn 4 --k 2 --n 8 --snr-db 5 --trials 64 --seed 11 "
        "--rate 0.693 --input qpsk --out " +
        out.string());
    REQUIRE(r.exit_code == 0);
    std::istringstream in(slurp(out));
    std::string line;
    std::getline(in, line);
    CHECK(line == "trial,I,a,b");
    int rows = 0;
    while (std::getline(in, line)) {
        long trial;
        double value, a, b;
        REQUIRE(std::sscanf(line.c_str(), "%ld,%lf,%lf,%lf", &trial, &value, &a, &b) == 4);
        CHECK(a == 0.0);
        ++rows;
    }
    CHECK(rows == 64);
    const auto summary = nlohmann::json::parse(r.out);
    CHECK(summary.contains("empirical_feinstein"));
    CHECK(summary.contains("theorem2_bound"));
}

TEST_CASE("validate passes on a clean build and lists enough identities") {
    const RunResult r = run_cli("validate");
    CHECK(r.exit_code == 0);
    int lines = 0;
    std::istringstream in(r.out);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("PASS", 0) == 0 || line.rfind("FAIL", 0) == 0) ++lines;
    }
    CHECK(lines >= 8);
}

TEST_CASE("validate detects an injected delta0 fault and names the residual") {
    const RunResult r = run_cli("validate --fault-delta0 1e-6");
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("FAIL quadratic-residual") != std::string::npos);
}
