#include "votewire/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace votewire::stats {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void RequireNonEmpty(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kEmptySample, "sample has no values");
}

std::vector<double> Sorted(std::span<const double> values) {
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  return v;
}

double ClampP(double p) { return std::clamp(p, 0.0, 1.0); }

}  // namespace

double Mean(std::span<const double> values) {
  RequireNonEmpty(values);
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double SampleVariance(std::span<const double> values) {
  if (values.size() < 2) throw Error(ErrorCode::kInsufficientData, "variance needs two values");
  const double m = Mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return ss / static_cast<double>(values.size() - 1);
}

double Correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorCode::kInsufficientData, "correlation needs paired samples of size >= 2");
  }
  const double mx = Mean(x);
  const double my = Mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

double QuantileSorted(std::span<const double> sorted, double q) {
  RequireNonEmpty(sorted);
  if (!(q >= 0.0 && q <= 1.0)) throw Error(ErrorCode::kQOutOfRange, "q = " + std::to_string(q));
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  if (frac == 0.0) return sorted[lo];
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double Quantile(std::span<const double> values, double q) {
  RequireNonEmpty(values);
  const auto sorted = Sorted(values);
  return QuantileSorted(sorted, q);
}

DistributionSummary Summarize(std::span<const double> values) {
  RequireNonEmpty(values);
  const auto sorted = Sorted(values);
  DistributionSummary s;
  s.n = sorted.size();
  s.mean = Mean(sorted);
  if (s.n >= 2) {
    s.std_dev = std::sqrt(SampleVariance(sorted));
    s.std_defined = true;
  }
  s.min = sorted.front();
  s.max = sorted.back();
  s.range = s.max - s.min;
  s.q10 = QuantileSorted(sorted, 0.10);
  s.q25 = QuantileSorted(sorted, 0.25);
  s.median = QuantileSorted(sorted, 0.50);
  s.q75 = QuantileSorted(sorted, 0.75);
  s.q90 = QuantileSorted(sorted, 0.90);
  return s;
}

TestResult AnovaF(std::span<const Sample> groups) {
  if (groups.size() < 2) throw Error(ErrorCode::kInsufficientData, "ANOVA needs at least two groups");
  std::size_t total = 0;
  double grand_sum = 0.0;
  for (const auto& g : groups) {
    if (g.values.size() < 2) {
      throw Error(ErrorCode::kInsufficientData, "group '" + g.label + "' has fewer than two values");
    }
    total += g.values.size();
    for (double v : g.values) grand_sum += v;
  }
  const std::size_t k = groups.size();
  if (total <= k) throw Error(ErrorCode::kInsufficientData, "not enough observations for ANOVA");

  const double grand_mean = grand_sum / static_cast<double>(total);
  double between = 0.0;
  double within = 0.0;
  for (const auto& g : groups) {
    const double m = Mean(g.values);
    between += static_cast<double>(g.values.size()) * (m - grand_mean) * (m - grand_mean);
    for (double v : g.values) within += (v - m) * (v - m);
  }
  const double df1 = static_cast<double>(k - 1);
  const double df2 = static_cast<double>(total - k);

  TestResult r;
  r.test_name = "anova_f";
  r.df = {df1, df2};
  if (within == 0.0) {
    r.degenerate = true;
    r.statistic = between == 0.0 ? 0.0 : kInf;
    r.p_value = between == 0.0 ? 1.0 : 0.0;
    return r;
  }
  r.statistic = (between / df1) / (within / df2);
  r.p_value = ClampP(FUpperTail(r.statistic, df1, df2));
  return r;
}

TestResult TTestTwoSample(std::span<const double> a, std::span<const double> b, bool pooled) {
  if (a.size() < 2 || b.size() < 2) {
    throw Error(ErrorCode::kInsufficientData, "t test needs two values per sample");
  }
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double diff = Mean(a) - Mean(b);
  const double va = SampleVariance(a);
  const double vb = SampleVariance(b);

  TestResult r;
  r.test_name = pooled ? "t_test_pooled" : "t_test_welch";
  double se2 = 0.0;
  double df = 0.0;
  if (pooled) {
    df = na + nb - 2.0;
    const double sp2 = ((na - 1.0) * va + (nb - 1.0) * vb) / df;
    se2 = sp2 * (1.0 / na + 1.0 / nb);
  } else {
    const double ua = va / na;
    const double ub = vb / nb;
    se2 = ua + ub;
    df = se2 > 0.0 ? se2 * se2 / (ua * ua / (na - 1.0) + ub * ub / (nb - 1.0)) : na + nb - 2.0;
  }
  r.df = {df, std::nullopt};
  if (se2 == 0.0) {
    r.degenerate = true;
    r.statistic = diff == 0.0 ? 0.0 : std::copysign(kInf, diff);
    r.p_value = diff == 0.0 ? 1.0 : 0.0;
    return r;
  }
  r.statistic = diff / std::sqrt(se2);
  r.p_value = ClampP(StudentTwoSidedTail(r.statistic, df));
  return r;
}

std::vector<double> MidRanks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = mid;
    i = j + 1;
  }
  return ranks;
}

TestResult VanDerWaerden(std::span<const Sample> groups) {
  if (groups.size() < 2) throw Error(ErrorCode::kInsufficientData, "Van der Waerden needs two groups");
  std::vector<double> pooled;
  for (const auto& g : groups) {
    if (g.values.empty()) throw Error(ErrorCode::kInsufficientData, "group '" + g.label + "' is empty");
    pooled.insert(pooled.end(), g.values.begin(), g.values.end());
  }
  const std::size_t n = pooled.size();
  if (n < 4) throw Error(ErrorCode::kInsufficientData, "Van der Waerden needs N >= 4");

  const auto ranks = MidRanks(pooled);
  std::vector<double> scores(n);
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    scores[i] = NormalQuantile(ranks[i] / static_cast<double>(n + 1));
    mean += scores[i];
  }
  // Without ties the scores already sum to zero; with ties they need not.
  mean /= static_cast<double>(n);
  double sum_sq = 0.0;
  for (auto& a : scores) {
    a -= mean;
    sum_sq += a * a;
  }
  const double s2 = sum_sq / static_cast<double>(n - 1);

  double t = 0.0;
  std::size_t offset = 0;
  for (const auto& g : groups) {
    double sum = 0.0;
    for (std::size_t i = 0; i < g.values.size(); ++i) sum += scores[offset + i];
    const double m = sum / static_cast<double>(g.values.size());
    t += static_cast<double>(g.values.size()) * m * m;
    offset += g.values.size();
  }

  TestResult r;
  r.test_name = "van_der_waerden";
  r.df = {static_cast<double>(groups.size() - 1), std::nullopt};
  if (s2 == 0.0) {
    r.degenerate = true;
    r.statistic = 0.0;
    r.p_value = 1.0;
    return r;
  }
  r.statistic = t / s2;
  r.p_value = ClampP(ChiSquareUpperTail(r.statistic, r.df.first));
  return r;
}

TestResult ChiSquareTwoRow(std::span<const double> row_a, std::span<const double> row_b, bool merge_sparse) {
  if (row_a.size() != row_b.size() || row_a.size() < 2) {
    throw Error(ErrorCode::kInsufficientData, "contingency table needs two rows of equal length >= 2");
  }
  const double total_a = std::accumulate(row_a.begin(), row_a.end(), 0.0);
  const double total_b = std::accumulate(row_b.begin(), row_b.end(), 0.0);
  const double n = total_a + total_b;
  if (total_a == 0.0 || total_b == 0.0) throw Error(ErrorCode::kEmptySample, "empty contingency row");
  const double min_row = std::min(total_a, total_b);

  std::vector<std::pair<double, double>> columns;
  std::pair<double, double> pending{0.0, 0.0};
  for (std::size_t j = 0; j < row_a.size(); ++j) {
    pending.first += row_a[j];
    pending.second += row_b[j];
    const double col = pending.first + pending.second;
    if (!merge_sparse ? col > 0.0 : min_row * col / n >= 5.0) {
      columns.push_back(pending);
      pending = {0.0, 0.0};
    }
  }
  if (pending.first + pending.second > 0.0) {
    if (columns.empty()) {
      columns.push_back(pending);
    } else {
      columns.back().first += pending.first;
      columns.back().second += pending.second;
    }
  }
  if (columns.size() < 2) {
    throw Error(ErrorCode::kDegenerateBinning, "all mass falls into a single column");
  }

  double stat = 0.0;
  for (const auto& [a, b] : columns) {
    const double col = a + b;
    const double ea = total_a * col / n;
    const double eb = total_b * col / n;
    stat += (a - ea) * (a - ea) / ea + (b - eb) * (b - eb) / eb;
  }
  TestResult r;
  r.test_name = "chi_square_independence";
  r.statistic = stat;
  r.df = {static_cast<double>(columns.size() - 1), std::nullopt};
  r.p_value = ClampP(ChiSquareUpperTail(stat, r.df.first));
  return r;
}

TestResult ChiSquareIndependence(std::span<const double> a, std::span<const double> b, std::size_t bins) {
  RequireNonEmpty(a);
  RequireNonEmpty(b);
  if (bins < 2) throw Error(ErrorCode::kInsufficientData, "need at least two bins");
  const auto [amin, amax] = std::minmax_element(a.begin(), a.end());
  const auto [bmin, bmax] = std::minmax_element(b.begin(), b.end());
  const double lo = std::min(*amin, *bmin);
  const double hi = std::max(*amax, *bmax);
  if (!(hi > lo)) throw Error(ErrorCode::kDegenerateBinning, "pooled range is empty");

  const double width = (hi - lo) / static_cast<double>(bins);
  auto bin_of = [&](double v) {
    const auto idx = static_cast<std::size_t>(std::floor((v - lo) / width));
    return std::min(idx, bins - 1);
  };
  std::vector<double> row_a(bins, 0.0), row_b(bins, 0.0);
  for (double v : a) row_a[bin_of(v)] += 1.0;
  for (double v : b) row_b[bin_of(v)] += 1.0;
  return ChiSquareTwoRow(row_a, row_b, true);
}

TestResult ChiSquareGof(std::span<const double> observed, std::span<const double> expected) {
  if (observed.size() != expected.size() || observed.size() < 2) {
    throw Error(ErrorCode::kInsufficientData, "goodness of fit needs matching lengths >= 2");
  }
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (!(expected[i] > 0.0)) throw Error(ErrorCode::kZeroExpected, "cell " + std::to_string(i));
    const double d = observed[i] - expected[i];
    stat += d * d / expected[i];
  }
  TestResult r;
  r.test_name = "chi_square_gof";
  r.statistic = stat;
  r.df = {static_cast<double>(observed.size() - 1), std::nullopt};
  r.p_value = ClampP(ChiSquareUpperTail(stat, r.df.first));
  return r;
}

std::vector<std::pair<double, double>> QqPoints(std::span<const double> a, std::span<const double> b,
                                                std::size_t k) {
  if (a.size() < 2 || b.size() < 2) throw Error(ErrorCode::kEmptySample, "Q-Q needs two values per sample");
  if (k < 2) throw Error(ErrorCode::kInsufficientData, "Q-Q needs k >= 2");
  const auto sa = Sorted(a);
  const auto sb = Sorted(b);
  std::vector<std::pair<double, double>> points;
  points.reserve(k);
  for (std::size_t i = 1; i <= k; ++i) {
    const double q = static_cast<double>(i) / static_cast<double>(k + 1);
    points.emplace_back(QuantileSorted(sa, q), QuantileSorted(sb, q));
  }
  return points;
}

}  // namespace votewire::stats
