#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skewdim/fiber.hpp"

namespace skewdim {

struct InvariantResult {
  std::string name;  // module.property
  bool passed = false;
  double residual = 0.0;
  std::string detail;
};

struct VerifyOptions {
  double truncation_tol = 1e-9;
  std::uint64_t seed = 1;
  int sample_points = 200;
  /// Negative control: flips one eigenvector before the determinism comparison.
  bool tamper_eigenvector_sign = false;
};

/// Runs every module's property checks against one configuration.
std::vector<InvariantResult> run_invariant_suite(const SkewProduct& s, const VerifyOptions& options);

}  // namespace skewdim
