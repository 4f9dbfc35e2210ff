// Command-line front end: pmf | pgf | pcf | simulate | hitting | levy | verify

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "voss/commands.hpp"
#include "voss/montecarlo.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<double> t;
  std::optional<double> lambda;
  std::optional<std::size_t> n;
  std::optional<unsigned> workers;
  std::optional<int> m_max;
  std::optional<int> k;
  std::optional<int> levy_terms;
  std::optional<double> probe_u;
  std::optional<std::string> counts_path;
  std::vector<double> u_grid;
  std::vector<double> theta_grid;
  std::vector<double> t_grid;
};

voss::RunConfig resolve(const Overrides& o) {
  voss::RunConfig cfg;
  cfg.workers = voss::default_workers();
  if (!o.config_path.empty()) {
    const unsigned env_workers = cfg.workers;
    cfg = voss::RunConfig::load(o.config_path);
    if (cfg.workers == 1) cfg.workers = env_workers;
  }
  if (o.seed) cfg.seed = *o.seed;
  if (o.out) cfg.out_path = *o.out;
  if (o.format) cfg.format = *o.format;
  if (o.t) cfg.t = *o.t;
  if (o.lambda) cfg.lambda = *o.lambda;
  if (o.n) cfg.n = *o.n;
  if (o.workers) cfg.workers = *o.workers;
  if (o.m_max) cfg.series.m_max = *o.m_max;
  if (o.k) cfg.k = *o.k;
  if (o.levy_terms) cfg.levy_terms = *o.levy_terms;
  if (o.probe_u) cfg.probe_u = *o.probe_u;
  if (o.counts_path) cfg.counts_path = *o.counts_path;
  if (!o.u_grid.empty()) cfg.u_grid = o.u_grid;
  if (!o.theta_grid.empty()) cfg.theta_grid = o.theta_grid;
  if (!o.t_grid.empty()) cfg.t_grid = o.t_grid;
  return cfg;
}

void emit(const voss::CommandOutput& result, const voss::RunConfig& cfg,
          bool is_verify) {
  std::ofstream file;
  if (!cfg.out_path.empty()) {
    file.open(cfg.out_path);
    if (!file) {
      throw voss::ValidationError({"cannot open output file " + cfg.out_path});
    }
  }
  std::ostream& data = cfg.out_path.empty() ? std::cout : file;
  // keep stdout machine-readable when the artifact goes there
  std::ostream& notes = cfg.out_path.empty() ? std::cerr : std::cout;

  if (is_verify) {
    for (const auto& line : result.summary) std::cout << line << '\n';
    if (!cfg.out_path.empty()) {
      file << result.report.dump(2) << '\n';
    } else if (cfg.format == "json") {
      std::cout << result.report.dump(2) << '\n';
    }
    return;
  }
  if (cfg.format == "json") {
    data << voss::to_json(result.table).dump(2) << '\n';
  } else {
    voss::write_csv(data, result.table);
  }
  for (const auto& line : result.summary) notes << line << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variable-order stable subordinator and subordinated Poisson "
               "process toolkit"};
  app.require_subcommand(1);
  // global flags are also accepted after the subcommand name
  app.fallthrough();
  Overrides o;
  app.add_option("--config", o.config_path, "JSON config file")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", o.seed, "RNG seed");
  app.add_option("--out", o.out, "output path (default: stdout)");
  app.add_option("--format", o.format, "csv or json");
  app.add_option("--t", o.t, "evaluation time");
  app.add_option("--lambda", o.lambda, "Poisson rate");
  app.add_option("--m-max", o.m_max, "largest tabulated state");

  auto* pmf = app.add_subcommand("pmf", "pmf table: series vs convolution");
  auto* pgf = app.add_subcommand("pgf", "probability generating function");
  pgf->add_option("--u", o.u_grid, "u grid in [0, 1]");
  auto* pcf = app.add_subcommand("pcf", "characteristic function");
  pcf->add_option("--theta", o.theta_grid, "theta grid");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo counts at t");
  simulate->add_option("--n", o.n, "sample size");
  simulate->add_option("--workers", o.workers, "worker threads");
  simulate->add_option("--counts", o.counts_path, "write raw counts here");
  auto* hitting = app.add_subcommand("hitting", "hitting-time CDF curve");
  hitting->add_option("--k", o.k, "level k >= 1");
  hitting->add_option("--t-grid", o.t_grid, "increasing times");
  hitting->add_option("--n", o.n, "sample size");
  hitting->add_option("--workers", o.workers, "worker threads");
  auto* levy = app.add_subcommand("levy", "per-segment discrete Levy measure");
  levy->add_option("--J", o.levy_terms, "number of jump sizes");
  levy->add_option("--probe-u", o.probe_u, "u for the reconstruction error");
  auto* verify = app.add_subcommand("verify", "run the verification suite");
  verify->add_option("--n", o.n, "Monte Carlo sample size");
  verify->add_option("--workers", o.workers, "worker threads");
  verify->add_option("--J", o.levy_terms, "Levy terms for reconstruction");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? voss::kExitSuccess : voss::kExitValidation;
  }

  try {
    const auto cfg = resolve(o);
    voss::CommandOutput result;
    bool is_verify = false;
    if (pmf->parsed()) {
      result = voss::cmd_pmf(cfg);
    } else if (pgf->parsed()) {
      result = voss::cmd_pgf(cfg);
    } else if (pcf->parsed()) {
      result = voss::cmd_pcf(cfg);
    } else if (simulate->parsed()) {
      result = voss::cmd_simulate(cfg);
    } else if (hitting->parsed()) {
      result = voss::cmd_hitting(cfg);
    } else if (levy->parsed()) {
      result = voss::cmd_levy(cfg);
    } else if (verify->parsed()) {
      is_verify = true;
      voss::VerificationHooks hooks;
#ifdef VOSS_CORRUPTED_ANALYTICS
      // test fixture build: shifts mass between two analytic pmf entries
      hooks.perturb_analytic_pmf = [](voss::PmfTable& table) {
        table.probs[1] += 1e-3;
        table.probs[2] -= 1e-3;
      };
#endif
      result = voss::cmd_verify(cfg, hooks);
    }
    emit(result, cfg, is_verify);
    return result.exit_status;
  } catch (const voss::ValidationError& e) {
    std::cerr << "validation error:\n";
    for (const auto& p : e.problems()) std::cerr << "  - " << p << '\n';
    return voss::kExitValidation;
  } catch (const std::domain_error& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return voss::kExitValidation;
  }
}
