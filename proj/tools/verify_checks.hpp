#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lieco::cli {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Model-scoped verification: closed-form endpoints, printed brackets,
/// closure, rank, dual-path agreement, and reduction identities for one of
/// the shipped models.
std::vector<CheckResult> verify_model(const std::string& model, std::uint64_t seed);

}  // namespace lieco::cli
