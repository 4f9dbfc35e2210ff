#include "voss/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "voss/verification.hpp"

namespace voss {

namespace {

// Reads doc[key] into target when present, recording type errors.
template <class T>
void read(const nlohmann::json& doc, const char* key, T& target,
          std::vector<std::string>& problems, const std::string& prefix = "") {
  const auto it = doc.find(key);
  if (it == doc.end()) return;
  try {
    target = it->template get<T>();
  } catch (const nlohmann::json::exception&) {
    problems.push_back("'" + prefix + key + "' has the wrong type");
  }
}

void reject_unknown(const nlohmann::json& doc,
                    const std::set<std::string>& known,
                    std::vector<std::string>& problems,
                    const std::string& prefix = "") {
  for (const auto& [key, value] : doc.items()) {
    if (!known.contains(key)) {
      problems.push_back("unknown key '" + prefix + key + "'");
    }
  }
}

const nlohmann::json* section(const nlohmann::json& doc, const char* key,
                              std::vector<std::string>& problems) {
  const auto it = doc.find(key);
  if (it == doc.end()) return nullptr;
  if (!it->is_object()) {
    problems.push_back(std::string("'") + key + "' must be an object");
    return nullptr;
  }
  return &*it;
}

std::vector<double> linspace(double lo, double hi, int points) {
  std::vector<double> out;
  for (int i = 0; i < points; ++i) {
    out.push_back(lo + (hi - lo) * i / (points - 1));
  }
  return out;
}

}  // namespace

RunConfig RunConfig::from_json(const nlohmann::json& doc) {
  std::vector<std::string> problems;
  if (!doc.is_object()) throw ValidationError({"config must be a JSON object"});
  RunConfig cfg;
  reject_unknown(doc,
                 {"segments", "lambda", "t", "series", "rng", "mc", "output",
                  "u_grid", "theta_grid", "t_grid", "k", "levy_terms",
                  "probe_u"},
                 problems);
  read(doc, "segments", cfg.segments, problems);
  read(doc, "lambda", cfg.lambda, problems);
  read(doc, "t", cfg.t, problems);
  read(doc, "u_grid", cfg.u_grid, problems);
  read(doc, "theta_grid", cfg.theta_grid, problems);
  read(doc, "t_grid", cfg.t_grid, problems);
  read(doc, "k", cfg.k, problems);
  read(doc, "levy_terms", cfg.levy_terms, problems);
  read(doc, "probe_u", cfg.probe_u, problems);
  if (const auto* s = section(doc, "series", problems)) {
    reject_unknown(*s, {"r_max", "tol", "m_max"}, problems, "series.");
    read(*s, "r_max", cfg.series.r_max, problems, "series.");
    read(*s, "tol", cfg.series.tol, problems, "series.");
    read(*s, "m_max", cfg.series.m_max, problems, "series.");
  }
  if (const auto* s = section(doc, "rng", problems)) {
    reject_unknown(*s, {"seed"}, problems, "rng.");
    read(*s, "seed", cfg.seed, problems, "rng.");
  }
  if (const auto* s = section(doc, "mc", problems)) {
    reject_unknown(*s, {"n", "workers"}, problems, "mc.");
    read(*s, "n", cfg.n, problems, "mc.");
    read(*s, "workers", cfg.workers, problems, "mc.");
  }
  if (const auto* s = section(doc, "output", problems)) {
    reject_unknown(*s, {"path", "format", "counts_path"}, problems, "output.");
    read(*s, "path", cfg.out_path, problems, "output.");
    read(*s, "format", cfg.format, problems, "output.");
    read(*s, "counts_path", cfg.counts_path, problems, "output.");
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError({"cannot open config file " + path.string()});
  nlohmann::json doc;
  try {
    // comments tolerated so example configs can be annotated
    doc = nlohmann::json::parse(in, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError({"config is not valid JSON: " + std::string(e.what())});
  }
  return from_json(doc);
}

void RunConfig::validate(bool statistical) const {
  std::vector<std::string> problems;
  if (segments.empty()) problems.emplace_back("segments must not be empty");
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& [duration, alpha] = segments[i];
    const std::string where = "segment " + std::to_string(i + 1);
    if (!(duration > 0.0) || !std::isfinite(duration)) {
      problems.push_back(where + ": duration must be positive");
    }
    if (!(alpha > 0.0 && alpha <= 1.0)) {
      problems.push_back(where + ": alpha must lie in (0, 1]");
    }
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    problems.emplace_back("lambda must be positive");
  }
  if (!(t >= 0.0) || !std::isfinite(t)) problems.emplace_back("t must be >= 0");
  if (series.r_max < 1) problems.emplace_back("series.r_max must be >= 1");
  if (!(series.tol > 0.0)) problems.emplace_back("series.tol must be > 0");
  if (series.m_max < 0) problems.emplace_back("series.m_max must be >= 0");
  if (format != "csv" && format != "json") {
    problems.emplace_back("output.format must be csv or json");
  }
  if (k < 1) problems.emplace_back("k must be >= 1");
  if (levy_terms < 1) problems.emplace_back("levy_terms must be >= 1");
  if (!(probe_u >= 0.0 && probe_u <= 1.0)) {
    problems.emplace_back("probe_u must lie in [0, 1]");
  }
  for (double u : u_grid) {
    if (!(u >= 0.0 && u <= 1.0)) {
      problems.emplace_back("u_grid values must lie in [0, 1]");
      break;
    }
  }
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= 0.0) || (i > 0 && !(t_grid[i] > t_grid[i - 1]))) {
      problems.emplace_back("t_grid must be increasing and >= 0");
      break;
    }
  }
  if (workers < 1) problems.emplace_back("mc.workers must be >= 1");
  if (statistical && n < kMinSamples) {
    problems.push_back("mc.n=" + std::to_string(n) + " is below " +
                       std::to_string(kMinSamples) +
                       "; statistical checks would be underpowered");
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));
}

AlphaSchedule RunConfig::schedule() const {
  return AlphaSchedule::from_segments(segments);
}

std::vector<double> RunConfig::u_values() const {
  return u_grid.empty() ? linspace(0.0, 1.0, 11) : u_grid;
}

std::vector<double> RunConfig::theta_values() const {
  return theta_grid.empty() ? linspace(0.0, std::numbers::pi, 17) : theta_grid;
}

std::vector<double> RunConfig::t_values() const {
  if (!t_grid.empty()) return t_grid;
  return t > 0.0 ? linspace(0.0, t, 11) : std::vector<double>{0.0};
}

}  // namespace voss
