#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace intlab::acceptance {

enum class Level { fast, full };

struct CriterionResult {
    std::string name;
    bool passed = false;
    std::string detail;  // measured values, one line
    double seconds = 0.0;
};

// The twelve verification criteria (operator algebra through the three-body
// suite). Fast level caps grid sizes and horizons; tolerances are identical.
std::vector<CriterionResult> run_criteria(Level level, std::uint64_t seed);

// Byte-identical artifacts from two seeded runs of a CSV-writing subcommand.
CriterionResult determinism_check(std::uint64_t seed);

}  // namespace intlab::acceptance
