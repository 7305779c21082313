// End-to-end checks of the command-line tool. The binary path arrives in the
// SISOPT_CLI environment variable (set by CTest).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "sisopt/model.hpp"
#include "sisopt/model_io.hpp"
#include "test_support.hpp"

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output; // stdout + stderr
};

RunResult run_cli(const std::string& args) {
    const char* cli = std::getenv("SISOPT_CLI");
    REQUIRE(cli != nullptr);
    const std::string cmd = std::string(cli) + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    RunResult result;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe))
        result.output += buf.data();
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string tmp_path(const std::string& name) {
    return "cli_test_" + name;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("r0 on the homogeneous builder") {
    RunResult r = run_cli("r0 --builder homogeneous --kappa 2");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"value\":2.0") != std::string::npos);
    CHECK(r.output.find("\"residual\"") != std::string::npos);
    CHECK(r.output.find("\"iterations\"") != std::string::npos);
}

TEST_CASE("re with a constant strategy") {
    RunResult r = run_cli("re --builder homogeneous --kappa 2 --eta-const 0.25");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"value\":0.5") != std::string::npos);
}

TEST_CASE("frontier CSV for the truncated multipartite model") {
    const std::string prefix = tmp_path("mp12");
    RunResult r = run_cli("frontier --builder multipartite --groups 12 --kappa 1 --loss re "
                          "--grid 41 --out " + prefix);
    CHECK(r.exit_code == 0);
    std::string csv = slurp(prefix + ".csv");
    REQUIRE(csv.rfind("cost,loss,status\n", 0) == 0);
    // R_0 < 1: the frontier is the single point (0, R_0) with R_0 near 0.697
    std::istringstream in(csv);
    std::string header, row;
    std::getline(in, header);
    REQUIRE(std::getline(in, row));
    const auto c1 = row.find(',');
    const auto c2 = row.find(',', c1 + 1);
    CHECK(std::stod(row.substr(0, c1)) == 0.0);
    CHECK(std::stod(row.substr(c1 + 1, c2 - c1 - 1)) == doctest::Approx(0.697).epsilon(0.01));
    std::string sidecar = slurp(prefix + "_strategies.json");
    CHECK(sidecar.find('[') != std::string::npos);
    std::remove((prefix + ".csv").c_str());
    std::remove((prefix + "_strategies.json").c_str());
}

TEST_CASE("frontier output is byte-identical across runs") {
    const std::string a = tmp_path("det_a"), b = tmp_path("det_b");
    const std::string args = "frontier --builder multipartite --groups 4 --kappa 2 --loss re "
                             "--grid 7 --seed 9 --out ";
    CHECK(run_cli(args + a).exit_code == 0);
    CHECK(run_cli(args + b).exit_code == 0);
    CHECK(slurp(a + ".csv") == slurp(b + ".csv"));
    CHECK(slurp(a + "_strategies.json") == slurp(b + "_strategies.json"));
    for (const std::string& p : {a, b}) {
        std::remove((p + ".csv").c_str());
        std::remove((p + "_strategies.json").c_str());
    }
}

TEST_CASE("anti-frontier on the scalar model coincides with the frontier line") {
    const std::string prefix = tmp_path("anti");
    RunResult r = run_cli("anti-frontier --builder homogeneous --kappa 2 --grid 5 --out " +
                          prefix);
    CHECK(r.exit_code == 0);
    std::string csv = slurp(prefix + ".csv");
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line); // header
    while (std::getline(in, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const double c = std::stod(line.substr(0, c1));
        const double l = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        CHECK(l == doctest::Approx(2.0 * (1.0 - c)).epsilon(1e-6));
    }
    std::remove((prefix + ".csv").c_str());
    std::remove((prefix + "_strategies.json").c_str());
}

TEST_CASE("equilibrium command") {
    RunResult r = run_cli("equilibrium --builder homogeneous --kappa 2");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"infected_fraction\": 0.5") != std::string::npos);
    CHECK(r.output.find("maximality_certificate") != std::string::npos);
}

TEST_CASE("erad-cost command") {
    RunResult r = run_cli("erad-cost --builder homogeneous --kappa 2");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"certified\":true") != std::string::npos);
}

TEST_CASE("stability command reports the sampled lower bound") {
    sisopt::SisModel a = sisopt::build_multipartite(6, 1.0);
    sisopt::SisModel b = sisopt::build_perturbed_multipartite(6, 1.0, 0.01);
    sisopt::save_model_file(a, tmp_path("stab_a.json"));
    sisopt::save_model_file(b, tmp_path("stab_b.json"));
    RunResult r = run_cli("stability --model-a " + tmp_path("stab_a.json") + " --model-b " +
                          tmp_path("stab_b.json") + " --samples 10 --seed 3");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("sup_gap_lower_bound") != std::string::npos);
    CHECK(r.output.find("lower bound") != std::string::npos);
    std::remove(tmp_path("stab_a.json").c_str());
    std::remove(tmp_path("stab_b.json").c_str());
}

TEST_CASE("reduce, blowup and verify-equiv round trip through files") {
    sisopt::SisModel m = testsup::sbm2();
    const std::string coarse_path = tmp_path("sbm2.json");
    sisopt::save_model_file(m, coarse_path);

    const std::string fine_path = tmp_path("sbm2_fine.json");
    const std::string map_path = tmp_path("sbm2_map.json");
    RunResult blow = run_cli("blowup --model " + coarse_path + " --splits 5,5 --out-model " +
                             fine_path + " --out-mapping " + map_path);
    CHECK(blow.exit_code == 0);
    CHECK(blow.output.find("blew up 2 sites to 10") != std::string::npos);

    RunResult verify = run_cli("verify-equiv --model-fine " + fine_path + " --model-coarse " +
                               coarse_path + " --mapping " + map_path + " --samples 10");
    CHECK(verify.exit_code == 0);
    CHECK(verify.output.find("all checks passed") != std::string::npos);
    CHECK(verify.output.find("FAIL") == std::string::npos);

    const std::string red_path = tmp_path("sbm2_red.json");
    const std::string redmap_path = tmp_path("sbm2_redmap.json");
    RunResult red = run_cli("reduce --model " + fine_path + " --out-model " + red_path +
                            " --out-mapping " + redmap_path);
    CHECK(red.exit_code == 0);
    CHECK(red.output.find("reduced 10 sites to 2") != std::string::npos);

    for (const std::string& p : {coarse_path, fine_path, map_path, red_path, redmap_path})
        std::remove(p.c_str());
}

TEST_CASE("malformed input exits with code 1") {
    RunResult r = run_cli("r0 --model does_not_exist.json");
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("error") != std::string::npos);

    RunResult none = run_cli("r0");
    CHECK(none.exit_code == 1);
}

TEST_CASE("numerical non-convergence exits with code 2") {
    RunResult r = run_cli("equilibrium --builder homogeneous --kappa 2 --tol-fix 0");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("numerical error") != std::string::npos);
}

TEST_CASE("worker cap respects VACC_PARETO_THREADS and keeps output identical") {
    const std::string a = tmp_path("thr_a"), b = tmp_path("thr_b");
    const std::string args = "frontier --builder multipartite --groups 4 --kappa 2 "
                             "--loss re --grid 5 --seed 7 --out ";
    const char* cli = std::getenv("SISOPT_CLI");
    REQUIRE(cli != nullptr);
    auto run_env = [&](const std::string& env, const std::string& out) {
        const std::string cmd = env + " " + std::string(cli) + " " + args + out + " 2>&1";
        return std::system(cmd.c_str());
    };
    CHECK(run_env("VACC_PARETO_THREADS=1", a) == 0);
    CHECK(run_env("VACC_PARETO_THREADS=2", b) == 0);
    CHECK(slurp(a + ".csv") == slurp(b + ".csv"));
    for (const std::string& p : {a, b}) {
        std::remove((p + ".csv").c_str());
        std::remove((p + "_strategies.json").c_str());
    }
}
