#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace covertnet {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Cross-checks every closed form and the solver against independent
/// numerical oracles (quadrature, grid search, finite differences,
/// Monte Carlo, exhaustive search). Sized to finish in seconds.
std::vector<CheckResult> run_validation(std::uint64_t seed);

}  // namespace covertnet
