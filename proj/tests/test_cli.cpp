#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

struct RunResult {
    int exit_code;
    std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
    const fs::path dir = fs::temp_directory_path() / "stripgram_cli_test";
    fs::create_directories(dir);
    const fs::path out = dir / "stdout.txt";
    const std::string cmd =
        std::string(STRIPGRAM_CLI_PATH) + " " + args + " > " + out.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    std::ifstream in(out);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return {WEXITSTATUS(status), text};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("gram artifact: valid JSON with config echo and format version") {
    const auto r = run_cli("gram --N 3 --precision 128");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.stdout_text);
    CHECK(j["format_version"] == 1);
    CHECK(j["config"]["subcommand"] == "gram");
    CHECK(j["config"]["N"] == 3);
    CHECK(j["config"]["precision"] == 128);
    CHECK(j["results"]["entries"].size() == 6);  // upper triangle of a 3x3
    // entry (1,1) is (beta - alpha) * gamma = 0.2 under the defaults
    const std::string v = j["results"]["entries"][0]["value"];
    CHECK(v.substr(0, 6) == "2.0000");
}

TEST_CASE("determinism: identical config gives bit-identical artifacts") {
    const auto a = run_cli("cholesky --N 8 --precision 192");
    const auto b = run_cli("cholesky --N 8 --precision 192");
    REQUIRE(a.exit_code == 0);
    CHECK(a.stdout_text == b.stdout_text);

    // and artifacts re-parse into equal structures
    const json ja = json::parse(a.stdout_text);
    const json jb = json::parse(b.stdout_text);
    CHECK(ja == jb);
}

TEST_CASE("config validation exits with code 2") {
    CHECK(run_cli("gram --N 3 --alpha 0.4").exit_code == 2);          // alpha <= 1/2
    CHECK(run_cli("gram --N 3 --alpha 0.9 --beta 0.7").exit_code == 2);
    CHECK(run_cli("gram --N 3 --gamma -1").exit_code == 2);
    CHECK(run_cli("lstar --sigma 0.7 --char-index 99").exit_code == 2);
    CHECK(run_cli("scan --N 32 --t-max 1 --t-step 0.5 --epsilons 0.5,0.2").exit_code == 2);
    CHECK(run_cli("definitely-not-a-command").exit_code == 2);
}

TEST_CASE("numerical breakdown exits with code 3 and names the pivot") {
    const fs::path dir = fs::temp_directory_path() / "stripgram_cli_test";
    fs::create_directories(dir);
    const fs::path err = dir / "stderr.txt";
    const std::string cmd = std::string(STRIPGRAM_CLI_PATH) +
                            " cholesky --N 512 --precision 53 2> " + err.string() + " > /dev/null";
    const int status = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(status) == 3);
    const std::string text = slurp(err);
    CHECK(text.find("pivot") != std::string::npos);
}

TEST_CASE("lstar point evaluation") {
    const auto r = run_cli("lstar --modulus 4 --char-index 1 --sigma 2 --tol 1e-10");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.stdout_text);
    CHECK(std::abs(j["results"]["re"].get<double>() - 0.915965594177219) < 1e-9);
    CHECK(std::abs(j["results"]["im"].get<double>()) < 1e-12);
}

TEST_CASE("distance reports both methods in agreement") {
    const auto r = run_cli(
        "distance --modulus 4 --char-index 1 --t 1.5 --N 16 --precision 512 --method both");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.stdout_text);
    CHECK(j["results"]["abs_difference"].get<double>() < 1e-10);
}

TEST_CASE("scan bundle: files, round trip, and run-length consistency") {
    const fs::path dir = fs::temp_directory_path() / "stripgram_cli_scan";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string base = (dir / "scan").string();
    const auto r = run_cli("scan --modulus 4 --char-index 1 --N 128 --t-max 3 --t-step 0.25 "
                           "--output " + base);
    REQUIRE(r.exit_code == 0);
    REQUIRE(fs::exists(base + ".json"));
    REQUIRE(fs::exists(base + "_trace.csv"));
    REQUIRE(fs::exists(base + "_density.csv"));
    REQUIRE(fs::exists(base + "_plot.dat"));

    const json j = json::parse(slurp(base + ".json"));
    const auto grid = j["results"]["grid"].get<std::vector<double>>();
    const auto dist = j["results"]["distances"].get<std::vector<double>>();
    REQUIRE(grid.size() == 25);
    REQUIRE(dist.size() == 25);

    // densities recomputable from the trace CSV
    std::ifstream trace(base + "_trace.csv");
    std::string line;
    std::getline(trace, line);  // header
    std::vector<double> ds;
    while (std::getline(trace, line)) {
        const auto comma = line.find(',');
        ds.push_back(std::stod(line.substr(comma + 1)));
    }
    REQUIRE(ds.size() == dist.size());
    const auto eps = j["results"]["epsilons"].get<std::vector<double>>();
    const auto dens = j["results"]["densities"].get<std::vector<double>>();
    for (size_t e = 0; e < eps.size(); ++e) {
        long below = 0;
        for (double d : ds)
            if (d < eps[e]) ++below;
        CHECK(static_cast<double>(below) / ds.size() == doctest::Approx(dens[e]).epsilon(1e-12));
    }
    fs::remove_all(dir);
}

TEST_CASE("verify passes on the default configuration") {
    const auto r = run_cli("verify --modulus 4");
    CHECK(r.exit_code == 0);
    CHECK(r.stdout_text.find("PASS  gram-vs-quadrature") != std::string::npos);
    CHECK(r.stdout_text.find("PASS  parseval") != std::string::npos);
    CHECK(r.stdout_text.find("PASS  orthonormality") != std::string::npos);
    CHECK(r.stdout_text.find("PASS  distance-vs-lstar") != std::string::npos);
    CHECK(r.stdout_text.find("FAIL") == std::string::npos);
}
