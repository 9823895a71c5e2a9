#pragma once

// Distribution summaries and the hypothesis-test battery.

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "votewire/core.hpp"
#include "votewire/special.hpp"

namespace votewire::stats {

struct Sample {
  std::vector<double> values;
  std::string label;
};

// Linear interpolation between order statistics at position q * (n - 1).
// Throws kEmptySample / kQOutOfRange.
double Quantile(std::span<const double> values, double q);
double QuantileSorted(std::span<const double> sorted, double q);

// Mean, sample standard deviation (n - 1), extremes and the 10/25/50/75/90%
// quantiles. A single value reports std 0 with std_defined = false.
DistributionSummary Summarize(std::span<const double> values);

// One-way analysis of variance, df = (k - 1, N - k).
TestResult AnovaF(std::span<const Sample> groups);

// Pooled-variance or Welch two-sample t statistic with a two-sided p.
TestResult TTestTwoSample(std::span<const double> a, std::span<const double> b, bool pooled);

// Normal scores test: pooled mid-ranks r mapped to NormalQuantile(r/(N+1))
// and centered on their mean (a no-op without ties),
// T = sum_j n_j * mean_j^2 / s^2 with s^2 = sum(score^2) / (N - 1), referred
// to chi-square with k - 1 df.
TestResult VanDerWaerden(std::span<const Sample> groups);

// Pearson chi-square on a 2 x K table. With merge_sparse, columns whose
// smaller expected cell is below 5 are merged into their right neighbour (a
// sparse tail merges left into the last kept column).
TestResult ChiSquareTwoRow(std::span<const double> row_a, std::span<const double> row_b,
                           bool merge_sparse = true);

// Bins both samples on the pooled range into `bins` equal-width bins and
// tests the 2 x bins table. Throws kDegenerateBinning when everything lands
// in one bin.
TestResult ChiSquareIndependence(std::span<const double> a, std::span<const double> b,
                                 std::size_t bins = 20);

// sum (O - E)^2 / E with cells - 1 df. Throws kZeroExpected.
TestResult ChiSquareGof(std::span<const double> observed, std::span<const double> expected);

// (Quantile(a, i/(k+1)), Quantile(b, i/(k+1))) for i = 1..k.
std::vector<std::pair<double, double>> QqPoints(std::span<const double> a, std::span<const double> b,
                                                std::size_t k);

// Mid-ranks (1-based) of the values, ties averaged.
std::vector<double> MidRanks(std::span<const double> values);

double Mean(std::span<const double> values);
double SampleVariance(std::span<const double> values);
double Correlation(std::span<const double> x, std::span<const double> y);

}  // namespace votewire::stats
