#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "voss/commands.hpp"

using voss::RunConfig;

namespace {

RunConfig base() {
  RunConfig c;
  c.n = 2000;
  return c;
}

double as_double(const voss::Cell& c) { return std::get<double>(c); }

}  // namespace

TEST_CASE("CSV round trip is bit exact") {
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_int_distribution<std::int64_t> ints(-1000000, 1000000);
  std::uniform_int_distribution<std::uint64_t> bits;
  std::uniform_int_distribution<int> letters(0, 25);
  for (int trial = 0; trial < 200; ++trial) {
    voss::Table t;
    const int cols = 1 + trial % 6;
    for (int c = 0; c < cols; ++c) t.columns.push_back("c" + std::to_string(c));
    for (int r = 0; r < 5; ++r) {
      std::vector<voss::Cell> row;
      for (int c = 0; c < cols; ++c) {
        switch (kind(gen)) {
          case 0:
            row.emplace_back(ints(gen));
            break;
          case 1: {
            double x = 0.0;
            do {
              const std::uint64_t b = bits(gen);
              std::memcpy(&x, &b, sizeof x);
            } while (!std::isfinite(x));
            row.emplace_back(x);
            break;
          }
          default: {
            std::string s = "s";
            for (int i = 0; i < 4; ++i) s += static_cast<char>('a' + letters(gen));
            row.emplace_back(s);
          }
        }
      }
      t.rows.push_back(std::move(row));
    }
    t.rows.push_back({});
    for (int c = 0; c < cols; ++c) {
      t.rows.back().emplace_back(c % 2 ? 1.0 : std::numeric_limits<double>::denorm_min());
    }
    std::stringstream io;
    voss::write_csv(io, t);
    const auto back = voss::read_csv(io);
    CHECK(back == t);
  }
}

TEST_CASE("config: defaults, unknown keys and aggregated errors") {
  const auto empty = RunConfig::from_json(nlohmann::json::object());
  CHECK(empty.segments.size() == 2);
  CHECK(empty.seed == 42);

  const auto doc = nlohmann::json::parse(R"({
    "segments": [[1.0, 0.5]], "lambda": 2.0, "t": 0.5,
    "series": {"m_max": 12}, "rng": {"seed": 7}, "mc": {"n": 3000},
    "output": {"format": "json"}})");
  const auto cfg = RunConfig::from_json(doc);
  CHECK(cfg.lambda == 2.0);
  CHECK(cfg.series.m_max == 12);
  CHECK(cfg.seed == 7);
  CHECK(cfg.n == 3000);
  CHECK(cfg.format == "json");

  try {
    (void)RunConfig::from_json(
        nlohmann::json::parse(R"({"lamda": 1, "t": "x", "series": {"rmax": 2}})"));
    FAIL("expected a validation error");
  } catch (const voss::ValidationError& e) {
    CHECK(e.problems().size() == 3);
  }

  RunConfig bad;
  bad.segments = {{-1.0, 0.5}, {1.0, 1.5}};
  bad.lambda = 0.0;
  bad.n = 10;
  try {
    bad.validate(true);
    FAIL("expected a validation error");
  } catch (const voss::ValidationError& e) {
    CHECK(e.problems().size() == 4);
  }
  CHECK_NOTHROW(base().validate(true));
}

TEST_CASE("pmf command") {
  const auto out = voss::cmd_pmf(base());
  CHECK(out.table.columns ==
        std::vector<std::string>{"m", "pmf_series", "pmf_convolution", "abs_diff",
                                 "trunc_bound", "status"});
  CHECK(out.table.rows.size() == 33);
  CHECK(out.exit_status == voss::kExitSuccess);
  for (int m = 0; m <= 10; ++m) {
    CHECK(as_double(out.table.rows[m][3]) <= 1e-6);
  }

  auto zero = base();
  zero.t = 0.0;
  const auto origin = voss::cmd_pmf(zero);
  REQUIRE(origin.table.rows.size() == 1);
  CHECK(as_double(origin.table.rows[0][2]) == 1.0);

  auto wide = base();
  wide.lambda = 20.0;
  CHECK(voss::cmd_pmf(wide).exit_status == voss::kExitLowConfidence);

  auto unit = base();
  unit.segments = {{2.0, 1.0}};
  unit.t = 2.0;
  const auto poisson = voss::cmd_pmf(unit);
  CHECK(as_double(poisson.table.rows[2][2]) ==
        doctest::Approx(2.0 * std::exp(-2.0)).epsilon(1e-13));
}

TEST_CASE("pgf and pcf commands") {
  const auto g = voss::cmd_pgf(base());
  CHECK(g.table.rows.size() == 11);
  CHECK(as_double(g.table.rows.back()[1]) == 1.0);
  auto c = base();
  c.theta_grid = {0.0, std::numbers::pi};
  const auto f = voss::cmd_pcf(c);
  CHECK(f.table.columns == std::vector<std::string>{"theta", "re", "im", "abs"});
  CHECK(as_double(f.table.rows[0][1]) == 1.0);
  auto bad = base();
  bad.u_grid = {1.5};
  CHECK_THROWS_AS((void)voss::cmd_pgf(bad), voss::ValidationError);
}

TEST_CASE("simulate command") {
  const auto out = voss::cmd_simulate(base());
  CHECK(out.table.columns ==
        std::vector<std::string>{"m", "count", "frequency", "analytic"});
  CHECK(std::get<std::string>(out.table.rows.back()[0]) == "tail");
  std::int64_t total = 0;
  for (const auto& row : out.table.rows) total += std::get<std::int64_t>(row[1]);
  CHECK(total == 2000);
  auto tiny = base();
  tiny.n = 10;
  CHECK_THROWS_AS((void)voss::cmd_simulate(tiny), voss::ValidationError);
}

TEST_CASE("hitting and levy commands") {
  auto h = base();
  h.k = 2;
  const auto hit = voss::cmd_hitting(h);
  CHECK(hit.table.rows.size() == 11);
  CHECK(as_double(hit.table.rows[0][1]) == 0.0);

  auto l = base();
  l.levy_terms = 20;
  const auto levy = voss::cmd_levy(l);
  CHECK(levy.table.rows.size() == 40);
  CHECK(std::get<std::int64_t>(levy.table.rows[20][0]) == 2);
  CHECK(as_double(levy.table.rows[0][3]) == doctest::Approx(0.6));
}

TEST_CASE("verify command") {
  auto c = base();
  c.n = 3000;
  const auto a = voss::cmd_verify(c);
  const auto b = voss::cmd_verify(c);
  CHECK(a.report.dump(2) == b.report.dump(2));
  CHECK(a.table.columns ==
        std::vector<std::string>{"name", "statistic", "lower", "upper", "pass"});
  // the J = 200 Levy check fails by construction of the truncation
  CHECK(a.exit_status == voss::kExitVerificationFailed);
  c.n = 10;
  CHECK_THROWS_AS((void)voss::cmd_verify(c), voss::ValidationError);
}
