// CSV rendering/parsing and the atomic file writer. The reference fixtures
// under tests/data are rounded published datasets; only their censoring
// pattern is asserted here.
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "censim/censoring.hpp"
#include "censim/io.hpp"

using namespace censim;

namespace {

std::string data_path(const char* name) {
    return std::string(CENSIM_DATA_DIR) + "/" + name;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        const std::size_t nl = text.find('\n', start);
        REQUIRE(nl != std::string::npos); // every line LF-terminated
        lines.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

} // namespace

TEST_SUITE("io") {

TEST_CASE("censored csv round-trips bit-exactly") {
    CensoredSample sample;
    sample.t = {0.5121480499019303, 1.0, 2.0 / 3.0, 1e-15};
    sample.delta = {0, 1, 1, 0};

    const std::string csv = censored_csv(sample);
    const auto lines = split_lines(csv);
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] == "t,delta");
    CHECK(lines[2] == "1,1");
    CHECK(csv.find('\r') == std::string::npos);

    std::istringstream in(csv);
    bool had_delta = false;
    const CensoredSample back = parse_censored_csv(in, &had_delta);
    CHECK(had_delta);
    REQUIRE(back.size() == sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
        CHECK(back.t[i] == sample.t[i]); // %.17g preserves doubles exactly
        CHECK(back.delta[i] == sample.delta[i]);
    }
}

TEST_CASE("values csv is a single named column") {
    const std::string csv = values_csv({1.5, 0.25}, "x");
    CHECK(csv == "x\n1.5\n0.25\n");
    CHECK(values_csv({}).rfind("t\n", 0) == 0);

    std::istringstream in(csv);
    bool had_delta = true;
    const CensoredSample back = parse_censored_csv(in, &had_delta);
    CHECK_FALSE(had_delta);
    CHECK(back.t == std::vector<double>{1.5, 0.25});
    CHECK(back.delta == std::vector<int>{1, 1}); // implied all-events
}

TEST_CASE("latent csv substitutes the numeric sentinel for cured subjects") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const std::string csv = latent_csv({0.5, nan, 1.25}, {0, 1, 0});
    const auto lines = split_lines(csv);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "x");
    CHECK(std::strtod(lines[1].c_str(), nullptr) == 0.5);
    CHECK(std::strtod(lines[2].c_str(), nullptr) == kCuredSentinel);
    CHECK(std::strtod(lines[3].c_str(), nullptr) == 1.25);

    CHECK_THROWS_AS(latent_csv({1.0}, {0, 1}), std::invalid_argument);
}

TEST_CASE("parser tolerates blank lines and CR line endings") {
    std::istringstream in("t,delta\r\n\r\n1,0\r\n2.5,1\r\n\n");
    const CensoredSample s = parse_censored_csv(in);
    CHECK(s.t == std::vector<double>{1.0, 2.5});
    CHECK(s.delta == std::vector<int>{0, 1});
}

TEST_CASE("parse errors name the offending 1-based line") {
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return parse_censored_csv(in);
    };
    CHECK_THROWS_WITH_AS(parse("time,delta\n1,1\n"),
                         doctest::Contains("line 1"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse("t,delta\n1,1\n2,2\n"),
                         doctest::Contains("line 3"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse("t,delta\nabc,1\n"),
                         doctest::Contains("not a number"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse("t,delta\n1\n"),
                         doctest::Contains("line 2"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse("t\n1,1\n"), doctest::Contains("single column"),
                         std::runtime_error);
    CHECK_THROWS_AS(parse(""), std::runtime_error);
    CHECK_THROWS_AS(parse("\n\n"), std::runtime_error);
}

TEST_CASE("reference fixtures carry the expected censoring patterns") {
    // 50 subjects, 15 censored; all censored rows tie at the largest
    // observed failure time 0.67 (order-statistic stopping).
    const CensoredSample t2 = read_censored_csv(data_path("type2_sample.csv"));
    REQUIRE(t2.size() == 50);
    CHECK(t2.events() == 35);
    for (std::size_t i = 0; i < 50; ++i) {
        if (t2.delta[i] == 0) CHECK(t2.t[i] == 0.67);
    }
    CHECK(std::is_sorted(t2.t.begin(), t2.t.end()));

    // 50 subjects under a fixed cutoff at 0.51 (2 dp); 22 censored there.
    const CensoredSample t1 = read_censored_csv(data_path("type1_sample.csv"));
    REQUIRE(t1.size() == 50);
    CHECK(t1.events() == 28);
    for (std::size_t i = 0; i < 50; ++i) {
        if (t1.delta[i] == 0) {
            CHECK(t1.t[i] == 0.51);
        } else {
            CHECK(t1.t[i] <= 0.51);
        }
    }

    const CensoredSample rnd = read_censored_csv(data_path("random_sample.csv"));
    REQUIRE(rnd.size() == 50);
    CHECK(rnd.events() == 31);

    const CensoredSample cure = read_censored_csv(data_path("cure_sample.csv"));
    REQUIRE(cure.size() == 50);
    CHECK(cure.events() == 20);
}

TEST_CASE("reading a missing file names the path") {
    CHECK_THROWS_WITH_AS(read_censored_csv("/nonexistent/no.csv"),
                         doctest::Contains("/nonexistent/no.csv"),
                         std::runtime_error);
}

TEST_CASE("atomic write leaves the full content and no temporary") {
    const auto dir = std::filesystem::temp_directory_path() / "censim_io_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "out.csv").string();

    atomic_write_file(path, "t\n1\n");
    atomic_write_file(path, "t,delta\n1,1\n"); // overwrite in place
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == "t,delta\n1,1\n");
    CHECK_FALSE(std::filesystem::exists(path + ".tmp"));

    std::filesystem::remove_all(dir);
}

} // TEST_SUITE
