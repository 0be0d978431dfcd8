#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Output {
    int status = 0;
    std::string text;
};

Output run(const std::string& args) {
    const std::string cmd = std::string(BESQ_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    Output out;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.text.append(buf, got);
    const int st = pclose(pipe);
    out.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return out;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        std::vector<std::string> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(cell);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST_CASE("edges: hard edge at zero up to s = 4") {
    const auto out = run("edges --a 1 --t 0.2 --p 0 --grid 40");
    REQUIRE(out.status == 0);
    const auto rows = parse_csv(out.text);
    REQUIRE(rows.size() == 41);
    CHECK(rows[0] == std::vector<std::string>{"s", "beta", "gamma", "eta"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (std::stod(rows[i][0]) <= 4.0) CHECK(std::stod(rows[i][3]) == 0.0);
    }
}

TEST_CASE("density nu1 at t = 0.9 carries unit mass") {
    const auto out = run("density nu1 --t 0.9");
    REQUIRE(out.status == 0);
    const auto rows = parse_csv(out.text);
    CHECK(rows[0] == std::vector<std::string>{"x", "density", "cumulative", "mass"});
    double sum = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) sum += std::stod(rows[i][3]);
    CHECK(std::abs(sum - 1.0) <= 1e-5);
}

TEST_CASE("json output round-trips csv numbers") {
    const auto csv = parse_csv(run("coeffs scaled --n 30 --t 0.3 --p 0.5").text);
    const auto js = nlohmann::json::parse(run("coeffs scaled --n 30 --t 0.3 --p 0.5 --format json").text);
    REQUIRE(js["rows"].size() + 1 == csv.size());
    for (std::size_t i = 0; i < js["rows"].size(); ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(js["rows"][i][j].get<double>() == std::stod(csv[i + 1][j]));
            const double v = js["rows"][i][j].get<double>();
            CHECK(nlohmann::json::parse(nlohmann::json(v).dump()).get<double>() == v);
        }
    }
}

TEST_CASE("exit codes and error records") {
    CHECK(run("edges --t 1.5").status == 2);
    CHECK(run("density bogus").status == 2);
    CHECK(run("nosuchcommand").status == 2);
    const auto out = run("field --a -1 --format json");
    CHECK(out.status == 2);
    const auto js = nlohmann::json::parse(out.text);
    CHECK(js["error"]["type"] == "validation");
}

TEST_CASE("simulate is deterministic in the seed") {
    const auto a = run("simulate --n 4 --steps 5 --replicas 3 --seed 7");
    const auto b = run("simulate --n 4 --steps 5 --replicas 3 --seed 7");
    REQUIRE(a.status == 0);
    CHECK(a.text == b.text);
    CHECK(run("simulate --n 4 --steps 5 --replicas 3 --seed 8").text != a.text);
}
