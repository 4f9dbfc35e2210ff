#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "voss/config.hpp"
#include "voss/table.hpp"
#include "voss/verification.hpp"

namespace voss {

enum ExitStatus : int {
  kExitSuccess = 0,
  kExitValidation = 1,
  kExitLowConfidence = 2,
  kExitVerificationFailed = 3,
};

struct CommandOutput {
  Table table;
  nlohmann::json report;              // verify only
  std::vector<std::string> summary;   // human-readable lines
  int exit_status = kExitSuccess;
};

// Column orders are fixed:
//   pmf      m, pmf_series, pmf_convolution, abs_diff, trunc_bound, status
//   pgf      u, pgf
//   pcf      theta, re, im, abs
//   simulate m, count, frequency, analytic   (last row m = "tail")
//   hitting  t, analytic_cdf, mc_estimate, mc_se
//   levy     segment, alpha, j, nu, total_mass, reconstruction_error
//   verify   name, statistic, lower, upper, pass
[[nodiscard]] CommandOutput cmd_pmf(const RunConfig& config);
[[nodiscard]] CommandOutput cmd_pgf(const RunConfig& config);
[[nodiscard]] CommandOutput cmd_pcf(const RunConfig& config);
[[nodiscard]] CommandOutput cmd_simulate(const RunConfig& config);
[[nodiscard]] CommandOutput cmd_hitting(const RunConfig& config);
[[nodiscard]] CommandOutput cmd_levy(const RunConfig& config);
[[nodiscard]] CommandOutput cmd_verify(const RunConfig& config,
                                       const VerificationHooks& hooks = {});

}  // namespace voss
