#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "stripgram/bigfloat.hpp"
#include "stripgram/serialize.hpp"

using namespace stripgram;

TEST_CASE("digit counts cover the significand") {
    CHECK(decimal_digits_for(53) == 18);
    CHECK(decimal_digits_for(256) == 80);
    CHECK(decimal_digits_for(512) == 157);
}

TEST_CASE("decimal rendering is deterministic and round-trips at precision") {
    const BigFloat x(1.0 / 3.0, 256);
    const std::string s1 = to_decimal(x);
    const std::string s2 = to_decimal(x);
    CHECK(s1 == s2);
    const BigFloat back(s1, 256);
    CHECK(abs(back - x).to_double() <= 1e-77);

    // a value with an exact short representation
    CHECK(to_decimal(BigFloat(0.0, 128)).substr(0, 2) == "0.");

    // doubles render with round-trip precision
    const double d = 0.1 + 0.2;
    double parsed = 0.0;
    std::sscanf(to_decimal(d).c_str(), "%lf", &parsed);
    CHECK(parsed == d);
}

TEST_CASE("sqrt(2) at 512 bits keeps 150+ digits stable across calls") {
    BigFloat two(2.0, 512);
    const std::string a = to_decimal(sqrt(two));
    const std::string b = to_decimal(sqrt(BigFloat(2.0, 512)));
    CHECK(a == b);
    CHECK(a.substr(0, 17) == "1.414213562373095");
}

TEST_CASE("atomic_write replaces content wholesale") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "stripgram_test_io";
    fs::create_directories(dir);
    const std::string path = (dir / "artifact.json").string();

    atomic_write(path, "first");
    atomic_write(path, "second");
    std::ifstream in(path);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content == "second");
    CHECK(!fs::exists(path + ".tmp"));
    fs::remove_all(dir);
}
