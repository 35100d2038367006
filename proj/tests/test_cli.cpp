#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "nic/cli.hpp"

using namespace nic;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "nic_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

int run_binary(const std::string& args) {
    const std::string cmd = std::string(NIC_CLI_PATH) + " " + args + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
#ifdef WEXITSTATUS
    return WEXITSTATUS(status);
#else
    return status;
#endif
}

} // namespace

TEST_CASE("flags override the config file") {
    const json file = {{"k", 10}, {"N", 32}, {"scheme", "fd2"}};
    const json flags = {{"k", "12.5"}};
    const auto c = resolve_config(Experiment::OneD, file, flags);
    CHECK(c.k == 12.5);
    CHECK(c.resolved_N() == 32);
    CHECK(c.scheme == Scheme::FD2);
    CHECK(c.resolved_K() == 12.5);
    CHECK(resolve_config(Experiment::Mode2D, json::object(), json::object()).resolved_K() == 1.0);
    CHECK(resolve_config(Experiment::Scatter, json::object(), json::object()).resolved_N() == 160);
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS(resolve_config(Experiment::OneD, {{"colour", 1}}, json::object()),
                    ConfigurationError);
    CHECK_THROWS_AS(resolve_config(Experiment::OneD, json::object(), {{"scheme", "spectral"}}),
                    ConfigurationError);
    CHECK_THROWS_AS(resolve_config(Experiment::OneD, json::object(), {{"k", "-1"}}),
                    ConfigurationError);
    CHECK_THROWS_AS(resolve_config(Experiment::OneD, json::array(), json::object()),
                    ConfigurationError);
    const auto conv = resolve_config(Experiment::Converge, json::object(), {{"scheme", "fd2"}});
    CHECK(conv.N_list == std::vector<int>{64, 128, 256, 512});
}

TEST_CASE("oned writes a solution and a summary") {
    const auto dir = scratch("oned");
    const auto c = resolve_config(Experiment::OneD, json::object(),
                                  {{"k", "10"}, {"N", "24"}, {"out", dir.string()}});
    std::ostringstream err;
    REQUIRE(run(c, err) == kExitOk);
    const auto summary = json::parse(slurp(dir / "summary.json"));
    CHECK(summary["config"]["experiment"] == "oned");
    CHECK(summary["results"]["norms"]["max_rel"].get<double>() < 1e-10);
    CHECK(summary.contains("runtime_s"));
    const auto rows = lines(dir / "solution.csv");
    CHECK(rows.front() == "rho,u_re,u_im,U_re,U_im");
    CHECK(rows.size() == 26);
    CHECK(rows.back().substr(rows.back().size() - 2) == ",,");
}

TEST_CASE("dispersion CSV starts at rho = 0") {
    const auto dir = scratch("dispersion");
    const auto c = resolve_config(Experiment::Dispersion, json::object(),
                                  {{"k", "1"}, {"samples", "10"}, {"out", dir.string()}});
    std::ostringstream err;
    REQUIRE(run(c, err) == kExitOk);
    const auto rows = lines(dir / "dispersion_compactified.csv");
    REQUIRE(rows.size() == 11);
    std::stringstream first(rows[1]);
    std::vector<double> v;
    for (std::string cell; std::getline(first, cell, ',');) v.push_back(std::stod(cell));
    REQUIRE(v.size() == 5);
    CHECK(v[0] == 0.0);
    CHECK(v[1] == doctest::Approx(1.0));
    CHECK(v[3] == doctest::Approx(-1.0));
}

TEST_CASE("scatter artifacts are deterministic") {
    const auto a = scratch("scatter_a");
    const auto b = scratch("scatter_b");
    std::ostringstream err;
    for (const auto& dir : {a, b}) {
        const auto c = resolve_config(
            Experiment::Scatter, json::object(),
            {{"k", "5"}, {"N", "32"}, {"theta-count", "16"}, {"out", dir.string()}});
        REQUIRE(run(c, err) == kExitOk);
    }
    const auto far = lines(a / "farfield.csv");
    CHECK(far.front() == "m,u_re,u_im");
    const auto summary = json::parse(slurp(a / "summary.json"));
    const int M = summary["results"]["M"].get<int>();
    CHECK(far.size() == static_cast<std::size_t>(2 * M + 2));
    CHECK(slurp(a / "field.csv") == slurp(b / "field.csv"));
    CHECK(slurp(a / "farfield.csv") == slurp(b / "farfield.csv"));
}

TEST_CASE("scatter at the reference wavenumber keeps 125 far-field rows") {
    const auto dir = scratch("scatter_k40");
    const auto c = resolve_config(
        Experiment::Scatter, json::object(),
        {{"N", "48"}, {"theta-count", "8"}, {"out", dir.string()}});
    std::ostringstream err;
    REQUIRE(run(c, err) == kExitOk);
    CHECK(lines(dir / "farfield.csv").size() == 126);
}

TEST_CASE("exit codes of the binary") {
    const auto dir = scratch("binary");
    const auto out = " --out " + dir.string();
    CHECK(run_binary("oned --k 5 --N 16" + out) == kExitOk);
    CHECK(fs::exists(dir / "summary.json"));
    CHECK(run_binary("oned --k -5" + out) == kExitValidation);
    CHECK(run_binary("oned --bogus 1" + out) == kExitValidation);
    CHECK(run_binary("") == kExitValidation);
    CHECK(run_binary("scatter --modes 250 --N 16" + out) == kExitNumerical);

    const auto cfg = dir / "config.json";
    std::ofstream(cfg) << R"({"k": 6, "N": 20, "unknown": true})";
    CHECK(run_binary("oned --config " + cfg.string() + out) == kExitValidation);
    std::ofstream(cfg) << R"({"k": 6, "N": 20})";
    CHECK(run_binary("mode2d --m 2 --config " + cfg.string() + out) == kExitOk);
    const auto summary = json::parse(slurp(dir / "summary.json"));
    CHECK(summary["config"]["k"].get<double>() == 6.0);
    CHECK(summary["config"]["m"].get<int>() == 2);
}

TEST_CASE("error line format") {
    RunConfig c;
    c.experiment = Experiment::Scatter;
    c.k = 5.0;
    c.modes = 250;
    c.N = 16;
    c.out = scratch("errline").string();
    std::ostringstream err;
    CHECK(run(c, err) == kExitNumerical);
    CHECK(err.str().rfind("nic-error code=3 kind=", 0) == 0);
}
