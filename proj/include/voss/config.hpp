#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "voss/analytics.hpp"
#include "voss/schedule.hpp"

namespace voss {

/**
 * Everything one CLI invocation needs. Loaded from a JSON document:
 *
 *   {
 *     "segments": [[0.5, 0.6], [0.5, 0.9]],   // (duration, alpha) pairs
 *     "lambda": 1.0,
 *     "t": 1.0,
 *     "series": {"r_max": 60, "tol": 1e-10, "m_max": 32},
 *     "rng": {"seed": 42},
 *     "mc": {"n": 100000, "workers": 1},
 *     "output": {"path": "", "format": "csv", "counts_path": ""},
 *     "u_grid": [...], "theta_grid": [...], "t_grid": [...],
 *     "k": 1, "levy_terms": 200, "probe_u": 0.5
 *   }
 *
 * Every key is optional; unknown keys are rejected.
 */
struct RunConfig {
  std::vector<std::pair<double, double>> segments{{0.5, 0.6}, {0.5, 0.9}};
  double lambda = 1.0;
  double t = 1.0;
  SeriesParams series;
  std::uint64_t seed = 42;
  std::size_t n = 100000;
  unsigned workers = 1;
  std::string out_path;
  std::string format = "csv";
  std::string counts_path;
  std::vector<double> u_grid;
  std::vector<double> theta_grid;
  std::vector<double> t_grid;
  int k = 1;
  int levy_terms = 200;
  double probe_u = 0.5;

  /// Smallest Monte Carlo sample accepted by statistical subcommands.
  static constexpr std::size_t kMinSamples = 1000;

  [[nodiscard]] static RunConfig from_json(const nlohmann::json& doc);
  [[nodiscard]] static RunConfig load(const std::filesystem::path& path);

  /// Throws ValidationError listing every violated constraint.
  void validate(bool statistical) const;

  [[nodiscard]] AlphaSchedule schedule() const;

  /// Grids with their defaults filled in.
  [[nodiscard]] std::vector<double> u_values() const;
  [[nodiscard]] std::vector<double> theta_values() const;
  [[nodiscard]] std::vector<double> t_values() const;
};

}  // namespace voss
