#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "votewire/regression.hpp"
#include "votewire/simulate.hpp"
#include "votewire/stats.hpp"

using namespace votewire;
using regression::OlsFit;
using regression::Point;

namespace {

std::vector<Point> RandomPoints(simulate::Rng& rng, std::size_t n) {
  std::vector<Point> p;
  const double slope = rng.Uniform(-60, 60), intercept = rng.Uniform(-5000, 9000), sigma = rng.Uniform(0.1, 500);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::round(rng.Uniform(50, 600));
    p.push_back({x, intercept + slope * x + rng.Normal(0, sigma)});
  }
  if (p.front().x == p.back().x) p.back().x += 1;
  return p;
}

}  // namespace

TEST_CASE("ols exact line") {
  const std::vector<Point> p{{0, 0}, {1, 1}, {2, 2}};
  const auto f = OlsFit(p);
  CHECK(f.slope == doctest::Approx(1.0));
  CHECK(f.intercept == doctest::Approx(0.0));
  CHECK(f.residual_std == doctest::Approx(0.0));
  CHECK(f.r_squared == 1.0);
  CHECK(f.n == 3);
}

TEST_CASE("ols hand example") {
  const std::vector<Point> p{{0, 0}, {1, 2}, {2, 2}};
  const auto f = OlsFit(p);
  CHECK(f.slope == doctest::Approx(1.0));
  CHECK(f.intercept == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("ols errors") {
  CHECK_THROWS_AS(OlsFit(std::vector<Point>{{0, 0}, {1, 1}}), Error);
  try {
    OlsFit(std::vector<Point>{{1, 0}, {1, 1}, {1, 2}});
    FAIL("expected DegenerateX");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDegenerateX);
  }
}

TEST_CASE("property: ols invariants") {
  simulate::Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    auto p = RandomPoints(rng, 3 + rng.UniformInt(0, 40));
    const auto f = OlsFit(p);
    double mx = 0, my = 0;
    for (const auto& q : p) {
      mx += q.x;
      my += q.y;
    }
    mx /= static_cast<double>(p.size());
    my /= static_cast<double>(p.size());
    CHECK(oracle::Near(f.intercept + f.slope * mx, my, 1e-9));
    CHECK(f.r_squared >= 0.0);
    CHECK(f.r_squared <= 1.0);

    const double c = rng.Uniform(-1e4, 1e4);
    auto shifted = p;
    for (auto& q : shifted) q.y += c;
    const auto g = OlsFit(shifted);
    CHECK(oracle::Near(g.intercept, f.intercept + c, 1e-9));
    CHECK(oracle::Near(g.slope, f.slope, 1e-9));
    CHECK(oracle::Near(g.slope_se, f.slope_se, 1e-9));

    const double k = rng.Uniform(0.1, 10);
    auto scaled = p;
    for (auto& q : scaled) q.y *= k;
    const auto h = OlsFit(scaled);
    CHECK(oracle::Near(h.slope, k * f.slope, 1e-9));
    CHECK(oracle::Near(h.intercept, k * f.intercept, 1e-9));
    CHECK(oracle::Near(h.slope_se, k * f.slope_se, 1e-9));
    CHECK(oracle::Near(h.intercept_se, k * f.intercept_se, 1e-9));
    CHECK(oracle::Near(h.residual_std, k * f.residual_std, 1e-9));
    CHECK(oracle::Near(h.r_squared, f.r_squared, 1e-9));
  }
}

TEST_CASE("ols against the golden-section oracle") {
  simulate::Rng rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = RandomPoints(rng, 3 + rng.UniformInt(0, 17));
    std::vector<double> x, y;
    for (const auto& q : p) {
      x.push_back(q.x);
      y.push_back(q.y);
    }
    const auto f = OlsFit(p);
    const auto o = oracle::Ols(x, y);
    CHECK(oracle::Near(f.slope, o.slope, 1e-6));
    CHECK(oracle::Near(f.intercept, o.intercept, 1e-6));
    CHECK(oracle::Near(f.slope_se, o.slope_se, 1e-6));
    CHECK(oracle::Near(f.intercept_se, o.intercept_se, 1e-6));
  }
}

TEST_CASE("per-vote slope recovery on a simulated group") {
  simulate::Rng rng(20040815, "ols-recovery");
  std::vector<Point> p;
  for (int i = 0; i < 4000; ++i) {
    const double votes = static_cast<double>(rng.UniformInt(250, 600));
    p.push_back({votes, 5606.0 + 47.11 * votes + rng.Normal(0, 300)});
  }
  const auto f = OlsFit(p);
  CHECK(std::fabs(f.slope - 47.11) <= 2 * f.slope_se);
  CHECK(f.slope_percent_error() == doctest::Approx(100 * f.slope_se / std::fabs(f.slope)));
}

TEST_CASE("group regression on a scenario") {
  auto cfg = simulate::DefaultPack2004();
  cfg.scale = 0.5;
  const auto d = simulate::GenerateScenario(cfg);
  auto machines = classify::ClassifyMachines(d.records);
  classify::AssignSubgroups(machines);

  const auto c = regression::GroupRegression(machines, d.tallies, regression::Direction::kIncoming,
                                             *regression::ParseSelector("C"));
  CHECK(std::fabs(c.fit.slope - 53.25) <= 3 * c.fit.slope_se);
  const auto b = regression::GroupRegression(machines, d.tallies, regression::Direction::kOutgoing,
                                             *regression::ParseSelector("B"));
  CHECK(std::fabs(b.fit.slope) < 3 * b.fit.slope_se);
  CHECK(std::is_sorted(c.scatter.begin(), c.scatter.end(),
                       [](const auto& x, const auto& y) { return x.machine_id < y.machine_id; }));

  std::vector<classify::MachineClassification> two(machines.begin(), machines.begin() + 2);
  try {
    regression::GroupRegression(two, d.tallies, regression::Direction::kIncoming, {two[0].traffic_class, {}});
    FAIL("expected EmptySelection");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEmptySelection);
  }
}

TEST_CASE("selectors") {
  CHECK(regression::ToString(*regression::ParseSelector("A-G1")) == "A-G1");
  CHECK(regression::ToString(*regression::ParseSelector("C")) == "C");
  CHECK_FALSE(regression::ParseSelector("B-G3").has_value());
  CHECK(regression::ParseDirection("outgoing") == regression::Direction::kOutgoing);
}
