#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "oracles.hpp"
#include "votewire/simulate.hpp"
#include "votewire/special.hpp"
#include "votewire/stats.hpp"

using namespace votewire;
using namespace votewire::stats;

namespace {

std::vector<Sample> Groups(std::initializer_list<std::vector<double>> gs) {
  std::vector<Sample> out;
  for (const auto& g : gs) out.push_back({g, "g" + std::to_string(out.size())});
  return out;
}

std::vector<double> Draw(simulate::Rng& rng, std::size_t n, double mean = 0.0, double sd = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.Normal(mean, sd);
  return v;
}

}  // namespace

TEST_CASE("summaries and quantiles") {
  const std::vector<double> three{1, 2, 3};
  auto s = Summarize(three);
  CHECK(s.median == 2.0);
  CHECK(s.mean == 2.0);
  CHECK(Quantile(std::vector<double>{1, 2, 3, 4}, 0.25) == doctest::Approx(1.75));
  s = Summarize(std::vector<double>{5});
  CHECK(s.q10 == 5.0);
  CHECK(s.q90 == 5.0);
  CHECK(s.std_dev == 0.0);
  CHECK_FALSE(s.std_defined);
  CHECK(Quantile(three, 0.5) == 2.0);
  CHECK(Quantile(std::vector<double>{10, 20}, 0.5) == 15.0);
  std::vector<double> hundred(100);
  std::iota(hundred.begin(), hundred.end(), 1.0);
  CHECK(Quantile(hundred, 0.9) == doctest::Approx(90.1));
  CHECK_THROWS_AS(Quantile(std::vector<double>{}, 0.5), Error);
  CHECK_THROWS_AS(Quantile(three, 1.5), Error);
}

TEST_CASE("property: summaries match sort-and-index on small samples") {
  simulate::Rng rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> v(1 + rng.UniformInt(0, 11));
    for (auto& x : v) x = static_cast<double>(rng.UniformInt(0, 6));  // ties on purpose
    const auto s = Summarize(v);
    CHECK(s.q10 == doctest::Approx(oracle::Quantile(v, 0.10)));
    CHECK(s.q25 == doctest::Approx(oracle::Quantile(v, 0.25)));
    CHECK(s.median == doctest::Approx(oracle::Quantile(v, 0.50)));
    CHECK(s.q75 == doctest::Approx(oracle::Quantile(v, 0.75)));
    CHECK(s.q90 == doctest::Approx(oracle::Quantile(v, 0.90)));
    CHECK(s.min <= s.q10);
    CHECK(s.q10 <= s.q25);
    CHECK(s.q25 <= s.median);
    CHECK(s.median <= s.q75);
    CHECK(s.q75 <= s.q90);
    CHECK(s.q90 <= s.max);
    CHECK(s.range == s.max - s.min);
  }
}

TEST_CASE("anova") {
  auto r = AnovaF(Groups({{1, 2, 3}, {1, 2, 3}}));
  CHECK(r.statistic == 0.0);
  CHECK(r.p_value == 1.0);
  r = AnovaF(Groups({{1, 2, 3}, {4, 5, 6}}));
  CHECK(r.statistic == doctest::Approx(13.5));
  CHECK(r.df.first == 1.0);
  CHECK(r.df.second == 4.0);
}

TEST_CASE("t test") {
  const std::vector<double> a{1, 2, 3, 4}, b{2, 3, 4, 5};
  auto r = TTestTwoSample(a, a, true);
  CHECK(r.statistic == 0.0);
  CHECK(r.p_value == 1.0);
  // Means 2.5 and 3.5, both variances 5/3: t = -1 / sqrt(5/3 * (1/4 + 1/4)).
  r = TTestTwoSample(a, b, true);
  CHECK(r.statistic == doctest::Approx(-1.0 / std::sqrt(5.0 / 6.0)));
  CHECK(r.df.first == 6.0);
  const auto f = AnovaF(Groups({a, b}));
  CHECK(oracle::Near(r.statistic * r.statistic, f.statistic, 1e-9));
}

TEST_CASE("property: pooled t squared equals F") {
  simulate::Rng rng(32);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = Draw(rng, 2 + rng.UniformInt(0, 20), 0, 3);
    const auto b = Draw(rng, 2 + rng.UniformInt(0, 20), 1, 3);
    const auto t = TTestTwoSample(a, b, true);
    const auto f = AnovaF(std::vector<Sample>{{a, "a"}, {b, "b"}});
    CHECK(oracle::Near(t.statistic * t.statistic, f.statistic, 1e-9));
    CHECK(t.p_value == doctest::Approx(f.p_value).epsilon(1e-6));
  }
}

TEST_CASE("van der waerden") {
  auto r = VanDerWaerden(Groups({{1, 2, 3, 4}, {1, 2, 3, 4}}));
  CHECK(std::fabs(r.statistic) < 1e-12);
  r = VanDerWaerden(Groups({{1, 2, 3}, {10, 11, 12}}));
  CHECK(r.statistic == doctest::Approx(oracle::VanDerWaerden({{1, 2, 3}, {10, 11, 12}})).epsilon(1e-9));
  CHECK(r.df.first == 1.0);
}

TEST_CASE("van der waerden: exact permutation distribution is label free") {
  // For n <= 8 the null distribution of T over all label assignments is a
  // function of the pooled scores only; compare it for two different data
  // sets with the same rank pattern and for a relabeled copy.
  const std::vector<double> pooled{3.1, 0.4, 7.7, 2.2, 9.0, 5.5, 1.8};
  auto distribution = [](const std::vector<double>& data) {
    std::vector<double> stats;
    const std::size_t n = data.size();
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      if (__builtin_popcount(mask) != 3) continue;
      std::vector<double> a, b;
      for (std::size_t i = 0; i < n; ++i) ((mask >> i) & 1 ? a : b).push_back(data[i]);
      stats.push_back(VanDerWaerden(std::vector<Sample>{{a, "a"}, {b, "b"}}).statistic);
    }
    std::sort(stats.begin(), stats.end());
    return stats;
  };
  auto transformed = pooled;
  for (auto& v : transformed) v = std::exp(v);  // strictly monotone
  const auto d1 = distribution(pooled), d2 = distribution(transformed);
  REQUIRE(d1.size() == d2.size());
  for (std::size_t i = 0; i < d1.size(); ++i) CHECK(d1[i] == doctest::Approx(d2[i]).epsilon(1e-12));
}

TEST_CASE("property: ANOVA shift invariance, VdW monotone invariance, relabeling") {
  simulate::Rng rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Sample> g{{Draw(rng, 5 + rng.UniformInt(0, 10)), "a"},
                          {Draw(rng, 5 + rng.UniformInt(0, 10), 0.5), "b"},
                          {Draw(rng, 5 + rng.UniformInt(0, 10), -0.5), "c"}};
    const auto f = AnovaF(g), v = VanDerWaerden(g);
    auto shifted = g;
    const double c = rng.Uniform(-100, 100);
    for (auto& s : shifted)
      for (auto& x : s.values) x += c;
    CHECK(AnovaF(shifted).statistic == doctest::Approx(f.statistic).epsilon(1e-9));
    auto monotone = g;
    for (auto& s : monotone)
      for (auto& x : s.values) x = std::exp(x) * 3 + 1;
    CHECK(VanDerWaerden(monotone).statistic == doctest::Approx(v.statistic).epsilon(1e-12));
    std::swap(g[0], g[2]);
    CHECK(AnovaF(g).statistic == doctest::Approx(f.statistic).epsilon(1e-12));
    CHECK(VanDerWaerden(g).statistic == doctest::Approx(v.statistic).epsilon(1e-12));
  }
}

TEST_CASE("chi-square two row and independence") {
  const std::vector<double> a{10, 20}, b{15, 15};
  const auto r = ChiSquareTwoRow(a, b, false);
  CHECK(r.statistic == doctest::Approx(12.0 / 7.0));
  CHECK(r.df.first == 1.0);
  const std::vector<double> sample{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 3, 4, 5};
  for (std::size_t k = 2; k <= 6; ++k) {
    const auto s = ChiSquareIndependence(sample, sample, k);
    CHECK(s.statistic == 0.0);
    CHECK(s.p_value == 1.0);
  }
  std::vector<double> lo(50), hi(50);
  for (int i = 0; i < 50; ++i) {
    lo[i] = i;
    hi[i] = 1000 + i;
  }
  CHECK(ChiSquareIndependence(lo, hi, 10).p_value < 1e-6);
  CHECK_THROWS_AS(ChiSquareIndependence(std::vector<double>{1, 1}, std::vector<double>{1, 1}, 5), Error);
}

TEST_CASE("chi-square goodness of fit") {
  const std::vector<double> e{15, 15};
  auto r = ChiSquareGof(e, e);
  CHECK(r.statistic == 0.0);
  CHECK(r.p_value == 1.0);
  r = ChiSquareGof(std::vector<double>{10, 20}, e);
  CHECK(r.statistic == doctest::Approx(10.0 / 3.0));
  CHECK(r.df.first == 1.0);
  CHECK(r.p_value == doctest::Approx(0.0679).epsilon(1e-3));
  CHECK(r.p_value == doctest::Approx(oracle::ChiSquareTail(10.0 / 3.0, 1)).epsilon(1e-6));
  CHECK_THROWS_AS(ChiSquareGof(std::vector<double>{1, 2}, std::vector<double>{0, 3}), Error);
}

TEST_CASE("qq points") {
  simulate::Rng rng(34);
  const auto a = Draw(rng, 200);
  for (const auto& [x, y] : QqPoints(a, a, 20)) CHECK(x == y);
  auto b = a;
  for (auto& v : b) v *= 2;
  for (const auto& [x, y] : QqPoints(a, b, 20)) CHECK(y == doctest::Approx(2 * x));
  std::vector<double> u(100), w(100);
  for (int i = 0; i < 100; ++i) {
    u[i] = rng.Uniform();
    w[i] = u[i] + 10;
  }
  for (const auto& [x, y] : QqPoints(u, w, 9)) CHECK(y == doctest::Approx(x + 10));
}

TEST_CASE("property: p-values lie in [0, 1]") {
  simulate::Rng rng(35);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = Draw(rng, 3 + rng.UniformInt(0, 30)), b = Draw(rng, 3 + rng.UniformInt(0, 30), rng.Uniform(-2, 2));
    const std::vector<Sample> g{{a, "a"}, {b, "b"}};
    for (const auto& r : {AnovaF(g), VanDerWaerden(g), TTestTwoSample(a, b, true), TTestTwoSample(a, b, false)}) {
      CHECK(r.p_value >= 0.0);
      CHECK(r.p_value <= 1.0);
      CHECK(r.df.first > 0.0);
    }
  }
}

TEST_CASE("mid ranks") {
  const std::vector<double> v{10, 20, 20, 5};
  CHECK(MidRanks(v) == std::vector<double>{2, 3.5, 3.5, 1});
}
