#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "lieco/signal.hpp"

namespace lieco::cli {

/// One run of the tool, assembled from a JSON config plus flag overrides.
struct Scenario {
  std::string task;  // simulate | wn | reduce | rank | close | verify
  std::string config_path;
  std::optional<std::string> out_override;
  std::optional<double> tol_override;
  std::optional<std::uint64_t> seed_override;
};

/// Exit codes promised on the command line surface.
enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kConfigError = 2,
  kDomainError = 3,
  kNumericError = 4,
};

int run_scenario(const Scenario& scenario);

}  // namespace lieco::cli
