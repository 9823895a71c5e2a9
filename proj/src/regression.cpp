#include "votewire/regression.hpp"

#include <cmath>
#include <algorithm>
#include <limits>
#include <map>

namespace votewire::regression {

double RegressionFit::slope_percent_error() const {
  return slope == 0.0 ? std::numeric_limits<double>::infinity() : 100.0 * slope_se / std::fabs(slope);
}

RegressionFit OlsFit(std::span<const Point> points) {
  const std::size_t n = points.size();
  if (n < 3) throw Error(ErrorCode::kTooFewPoints, "least squares needs at least three points");
  double mx = 0.0, my = 0.0;
  for (const auto& p : points) {
    mx += p.x;
    my += p.y;
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);

  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& p : points) {
    const double dx = p.x - mx;
    const double dy = p.y - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw Error(ErrorCode::kDegenerateX, "every x value is identical");

  RegressionFit f;
  f.n = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0.0;
  for (const auto& p : points) {
    const double r = p.y - my - f.slope * (p.x - mx);
    sse += r * r;
  }
  const double s2 = sse / static_cast<double>(n - 2);
  f.residual_std = std::sqrt(s2);
  f.slope_se = std::sqrt(s2 / sxx);
  f.intercept_se = std::sqrt(s2 * (1.0 / static_cast<double>(n) + mx * mx / sxx));
  f.r_squared = syy == 0.0 ? 1.0 : std::clamp(1.0 - sse / syy, 0.0, 1.0);
  return f;
}

std::string_view ToString(Direction d) { return d == Direction::kIncoming ? "incoming" : "outgoing"; }

std::optional<Direction> ParseDirection(std::string_view s) {
  if (s == "incoming" || s == "Incoming" || s == "in") return Direction::kIncoming;
  if (s == "outgoing" || s == "Outgoing" || s == "out") return Direction::kOutgoing;
  return std::nullopt;
}

std::string ToString(const Selector& s) {
  std::string out(votewire::ToString(s.traffic_class));
  if (s.subgroup) {
    out += '-';
    out += votewire::ToString(*s.subgroup);
  }
  return out;
}

std::optional<Selector> ParseSelector(std::string_view s) {
  Selector sel;
  const auto dash = s.find('-');
  auto cls = ParseTrafficClass(s.substr(0, dash));
  if (!cls) return std::nullopt;
  sel.traffic_class = *cls;
  if (dash != std::string_view::npos) {
    auto g = ParseSubgroup(s.substr(dash + 1));
    if (!g) return std::nullopt;
    sel.subgroup = g;
  }
  return sel;
}

GroupFit GroupRegression(std::span<const classify::MachineClassification> machines,
                         std::span<const TallySheet> tallies, Direction direction, const Selector& selector) {
  std::map<std::string_view, const TallySheet*> votes;
  for (const auto& t : tallies) {
    if (t.election == Election::kPRR2004) votes[t.machine_id] = &t;
  }
  GroupFit g;
  g.selector = selector;
  g.direction = direction;
  std::vector<Point> points;
  for (const auto& m : machines) {
    if (m.traffic_class != selector.traffic_class) continue;
    if (selector.subgroup && m.subgroup != selector.subgroup) continue;
    auto it = votes.find(m.machine_id);
    if (it == votes.end()) continue;
    ScatterPoint p;
    p.votes = it->second->yes_no_votes();
    p.bytes = direction == Direction::kIncoming ? m.final_session.output_octets : m.final_session.input_octets;
    p.machine_id = m.machine_id;
    points.push_back({static_cast<double>(p.votes), static_cast<double>(p.bytes)});
    g.scatter.push_back(std::move(p));
  }
  if (points.size() < 3) {
    throw Error(ErrorCode::kEmptySelection,
                "selector " + ToString(selector) + " matched " + std::to_string(points.size()) + " machines");
  }
  std::sort(g.scatter.begin(), g.scatter.end(),
            [](const ScatterPoint& a, const ScatterPoint& b) { return a.machine_id < b.machine_id; });
  g.fit = OlsFit(points);
  return g;
}

}  // namespace votewire::regression
