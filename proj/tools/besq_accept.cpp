#include <CLI11.hpp>
#include <cstdio>

#include "besq/acceptance.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria: one PASS/FAIL line per criterion"};
    int only = 0;
    app.add_option("--criterion", only, "Run a single criterion (1-13)")->check(CLI::Range(1, besq::kCriterionCount));
    CLI11_PARSE(app, argc, argv);

    std::setvbuf(stdout, nullptr, _IONBF, 0);
    int failed = 0;
    auto report = [&](const besq::CriterionResult& r) {
        std::printf("%s %2d %s: %s [%.1fs]\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.detail.c_str(),
                    r.seconds);
        failed += r.passed ? 0 : 1;
    };
    if (only > 0) {
        report(besq::run_criterion(only));
    } else {
        for (int id = 1; id <= besq::kCriterionCount; ++id) report(besq::run_criterion(id));
    }
    return failed == 0 ? 0 : 1;
}
