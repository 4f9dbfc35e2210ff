#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "voss/analytics.hpp"
#include "voss/rng.hpp"

namespace voss {

/// A harness input that cannot produce a meaningful verdict.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> problems);

  [[nodiscard]] const std::vector<std::string>& problems() const noexcept {
    return problems_;
  }

 private:
  std::vector<std::string> problems_;
};

/// One verdict: pass iff lower <= statistic <= upper.
struct Check {
  std::string name;
  double statistic = 0.0;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  bool pass = false;
  std::string details;
  std::uint64_t n = 0;  // Monte Carlo sample size, 0 for deterministic checks
};

struct VerificationReport {
  std::vector<Check> checks;
  RngSpec seed_provenance;

  [[nodiscard]] bool all_passed() const;
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Sizes and seeds for the full suite. The reference case is two segments
/// (0.5, 0.6), (0.5, 0.9) with lambda = 1 at t = 1.
struct VerificationConfig {
  std::vector<std::pair<double, double>> segments{{0.5, 0.6}, {0.5, 0.9}};
  double lambda = 1.0;
  double t = 1.0;
  std::uint64_t seed = 42;
  std::size_t n = 100000;
  unsigned workers = 1;
  SeriesParams series;
  int levy_terms = 200;

  /// Smallest sample size the statistical checks accept.
  static constexpr std::size_t kMinSamples = 1000;
};

/// Test seam: lets a fixture perturb the analytic pmf before it is
/// compared, to prove the harness notices.
struct VerificationHooks {
  std::function<void(PmfTable&)> perturb_analytic_pmf;
};

[[nodiscard]] VerificationReport run_verification(
    const VerificationConfig& config, const VerificationHooks& hooks = {});

}  // namespace voss
