#pragma once

// Ordinary least squares for bytes-vs-votes fits.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "votewire/classify.hpp"
#include "votewire/core.hpp"

namespace votewire::regression {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct RegressionFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double intercept_se = 0.0;
  double r_squared = 0.0;  // 1 when every y is equal
  std::size_t n = 0;
  double residual_std = 0.0;

  // 100 * slope_se / |slope|.
  double slope_percent_error() const;
};

// Centered sums; residual variance over n - 2. Throws kTooFewPoints below
// three points and kDegenerateX when every x is equal.
RegressionFit OlsFit(std::span<const Point> points);

// Incoming = output_octets (server -> machine), Outgoing = input_octets.
enum class Direction { kIncoming, kOutgoing };

std::string_view ToString(Direction d);
std::optional<Direction> ParseDirection(std::string_view s);

struct Selector {
  TrafficClass traffic_class = TrafficClass::kHighWire;
  std::optional<Subgroup> subgroup;
};

std::string ToString(const Selector& s);  // "A", "A-G1", ...
std::optional<Selector> ParseSelector(std::string_view s);

struct ScatterPoint {
  std::uint64_t votes = 0;
  std::uint64_t bytes = 0;
  std::string machine_id;
};

struct GroupFit {
  Selector selector;
  Direction direction = Direction::kIncoming;
  RegressionFit fit;
  std::vector<ScatterPoint> scatter;  // sorted by machine id
};

// Joins classified machines with their PRR2004 tallies and fits
// (total votes, octets in the chosen direction). Machines without a tally
// are left out. Throws kEmptySelection when fewer than three machines match.
GroupFit GroupRegression(std::span<const classify::MachineClassification> machines,
                         std::span<const TallySheet> tallies, Direction direction, const Selector& selector);

}  // namespace votewire::regression
