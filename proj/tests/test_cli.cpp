#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "test_util.hpp"

using testutil::close_abs;

namespace {

namespace fs = std::filesystem;

const std::string& cli_path() {
    static const std::string path = [] {
        const char* env = std::getenv("LAGCESARO_CLI");
        REQUIRE_MESSAGE(env != nullptr, "LAGCESARO_CLI must point at the built binary");
        return std::string(env);
    }();
    return path;
}

fs::path scratch_dir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / "lagcesaro_cli_test";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& args) {
    const auto out_path = scratch_dir() / "stdout.txt";
    const auto err_path = scratch_dir() / "stderr.txt";
    const std::string cmd = "\"" + cli_path() + "\" " + args + " > \"" + out_path.string() +
                            "\" 2> \"" + err_path.string() + "\"";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    return r;
}

} // namespace

TEST_CASE("coeffs emits machine-readable JSON that round-trips") {
    const auto r = run_cli("coeffs --function f1 --alpha 0 --n-max 8 --format json");
    REQUIRE(r.exit_code == 0);
    const auto report = nlohmann::json::parse(r.out);
    CHECK(report.at("command") == "coeffs");
    CHECK(close_abs(report.at("results").at("a_nu")[0].get<double>(), 2.0 / 3.0, 1e-10));
    CHECK(close_abs(report.at("results").at("a_nu")[1].get<double>(), 2.0 / 9.0, 1e-10));

    const auto reparsed = nlohmann::json::parse(report.dump());
    CHECK(report == reparsed);
    CHECK(report.dump() == reparsed.dump());
}

TEST_CASE("sweep CSV carries the pinned header and exact small-n deviation") {
    const auto r = run_cli("sweep --function f1 --alpha 0 --gamma 1 --eta 0.125 "
                           "--n-min 2 --n-max 8 --n-count 3 --method direct --format csv");
    REQUIRE(r.exit_code == 0);
    std::istringstream lines(r.out);
    std::string header;
    REQUIRE(std::getline(lines, header));
    CHECK(header == "n,deviation_direct,deviation_kernel,bound_theorem,"
                    "bound_corollary_refined,bound_corollary_special,ratio");
    std::string row;
    REQUIRE(std::getline(lines, row));
    CHECK(row.rfind("2,", 0) == 0);
    const auto comma = row.find(',');
    const auto next = row.find(',', comma + 1);
    const double dev = std::stod(row.substr(comma + 1, next - comma - 1));
    CHECK(close_abs(dev, 13.0 / 81.0, 1e-8));
}

TEST_CASE("parameter-window violations exit 2 and quote the inequality") {
    const auto r = run_cli("sweep --function f1 --alpha 0 --gamma 1 --eta 0.9 "
                           "--n-min 2 --n-max 4 --n-count 2");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("0 < eta <") != std::string::npos);

    const auto r2 = run_cli("verify-lemmas --beta 0 --lambda 0 --theta 5 "
                            "--n-min 8 --n-max 16 --n-count 2");
    CHECK(r2.exit_code == 2);
    CHECK(r2.err.find("0 < theta < 4") != std::string::npos);
}

TEST_CASE("numerical failures exit 3") {
    const auto r = run_cli("verify-lemmas --beta 0 --lambda 0 --c 1 --delta 1800 "
                           "--theta 2 --n-min 8 --n-max 1000 --n-count 4");
    CHECK(r.exit_code == 3);
    CHECK(!r.err.empty());
}

TEST_CASE("usage errors exit 2") {
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("coeffs --no-such-flag 1").exit_code == 2);
    CHECK(run_cli("sweep --function f3 --n-min 2 --n-max 4 --n-count 2").exit_code == 2);
    // --delta only modifies the function when the function accepts it.
    CHECK(run_cli("coeffs --function f1 --delta 0.5 --n-max 4").exit_code == 2);
}

TEST_CASE("config files load, and explicit flags win over them") {
    const auto cfg_path = scratch_dir() / "config.json";
    {
        std::ofstream out(cfg_path);
        out << R"({"alpha": 0.25, "n_max": 4, "function": {"kind": "f1"}})";
    }

    const auto defaulted =
        run_cli("coeffs --config \"" + cfg_path.string() + "\" --format json");
    REQUIRE(defaulted.exit_code == 0);
    const auto j1 = nlohmann::json::parse(defaulted.out);
    CHECK(j1.at("config").at("alpha").get<double>() == 0.25);
    CHECK(j1.at("config").at("n_max").get<int>() == 4);

    const auto overridden = run_cli("coeffs --config \"" + cfg_path.string() +
                                    "\" --alpha 0 --format json");
    REQUIRE(overridden.exit_code == 0);
    const auto j2 = nlohmann::json::parse(overridden.out);
    CHECK(j2.at("config").at("alpha").get<double>() == 0.0);

    const auto broken = scratch_dir() / "broken.json";
    {
        std::ofstream out(broken);
        out << "{not json";
    }
    CHECK(run_cli("coeffs --config \"" + broken.string() + "\"").exit_code == 2);
    CHECK(run_cli("coeffs --config \"" + (scratch_dir() / "missing.json").string() + "\"")
              .exit_code == 2);
}

TEST_CASE("--output writes the report to a file instead of stdout") {
    const auto out_path = scratch_dir() / "report.json";
    std::error_code ec;
    fs::remove(out_path, ec);
    const auto r = run_cli("coeffs --function f1 --n-max 4 --format json --output \"" +
                           out_path.string() + "\"");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.empty());
    REQUIRE(fs::exists(out_path));
    const auto report = nlohmann::json::parse(slurp(out_path));
    CHECK(report.at("results").at("a_nu").size() == 5);
}
