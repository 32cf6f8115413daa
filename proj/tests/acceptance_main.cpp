// Verification suite: runs every criterion at full strength, prints one
// pass/fail line each, then checks the end-to-end fast run and artifact
// determinism. Exits nonzero on any failure.

#include <chrono>
#include <cstdio>
#include <filesystem>

#include "intlab/acceptance.hpp"
#include "intlab/cli.hpp"

namespace {

struct Budget {
    const char* name;
    double seconds;
};

// wall-clock budgets per criterion, in suite order
constexpr Budget kBudgets[] = {
    {"operator algebra", 1.0},  {"commutator", 1.0},  {"wronskian", 2.0},
    {"symmetry", 5.0},          {"hodograph", 1.0},   {"burgers", 10.0},
    {"dispersion", 1.0},        {"residual", 30.0},   {"jost", 5.0},
    {"triad", 30.0},            {"quartet", 5.0},     {"threebody", 60.0},
};

}  // namespace

int main() {
    using intlab::acceptance::Level;
    constexpr std::uint64_t kSeed = 20250810;

    bool all_ok = true;
    const auto results = intlab::acceptance::run_criteria(Level::full, kSeed);
    for (size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        const bool in_budget = r.seconds <= kBudgets[i].seconds;
        const bool ok = r.passed && in_budget;
        all_ok = all_ok && ok;
        std::printf("[%s] %2zu. %-58s %6.2fs (budget %.0fs)\n", ok ? "PASS" : "FAIL", i + 1,
                    r.name.c_str(), r.seconds, kBudgets[i].seconds);
        if (!r.passed) std::printf("            %s\n", r.detail.c_str());
        if (!in_budget) std::printf("            over budget\n");
    }

    // end-to-end: the fast verification pass completes under its budget and
    // seeded artifacts are byte-identical
    const auto t0 = std::chrono::steady_clock::now();
    namespace fs = std::filesystem;
    const fs::path out = fs::temp_directory_path() / "intlab-acceptance-verify";
    std::error_code ec;
    fs::remove_all(out, ec);
    intlab::cli::RunConfig rc;
    rc.subcommand = "verify-all";
    rc.params = {{"level", "fast"}};
    rc.out_dir = out;
    rc.seed = kSeed;
    int code = 1;
    try {
        code = intlab::cli::dispatch(rc);
    } catch (const std::exception& e) {
        std::printf("verify-all raised: %s\n", e.what());
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool e2e = code == 0 && wall < 120.0;
    all_ok = all_ok && e2e;
    std::printf("[%s] 13. %-58s %6.2fs (budget 120s)\n", e2e ? "PASS" : "FAIL",
                "end-to-end fast verification run + determinism", wall);
    fs::remove_all(out, ec);

    std::printf("%s\n", all_ok ? "ACCEPTANCE: ALL CRITERIA PASSED"
                               : "ACCEPTANCE: FAILURES PRESENT");
    return all_ok ? 0 : 1;
}
