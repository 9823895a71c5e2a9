#pragma once

// Plain SVG 1.1 charts. Coordinates are printed with two decimals so the
// bytes depend only on the data.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "votewire/core.hpp"

namespace votewire::svg {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct Line {
  std::string label;
  double intercept = 0.0;
  double slope = 0.0;
};

std::string Scatter(const std::string& title, const std::string& x_label, const std::string& y_label,
                    const std::vector<Series>& series, const std::vector<Line>& lines = {});

struct Box {
  std::string label;
  DistributionSummary summary;
};

// Box width proportional to the sample size; whiskers at the 10% and 90%
// quantiles.
std::string BoxPlot(const std::string& title, const std::string& y_label, const std::vector<Box>& boxes);

// Quantile pairs against the identity line.
std::string QqPlot(const std::string& title, const std::string& x_label, const std::string& y_label,
                   const std::vector<std::pair<double, double>>& points);

// One polyline per series over shared categorical x positions.
std::string MeansChart(const std::string& title, const std::string& y_label,
                       const std::vector<std::string>& categories, const std::vector<Series>& series);

}  // namespace votewire::svg
