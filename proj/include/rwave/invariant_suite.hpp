#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "rwave/grid.hpp"

namespace rwave {

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;      // measured quantity
  double tolerance = 0.0;  // bound it is compared against
  std::string detail;
};

/// Fast self-checks over every module on the given grid (d = 4 adds the
/// Morawetz checks). Nothing here is slower than a few seconds on 16^4.
std::vector<CheckResult> run_invariant_suite(const GridSpec& grid, std::uint64_t seed);

nlohmann::json to_json(const std::vector<CheckResult>& checks);

}  // namespace rwave
