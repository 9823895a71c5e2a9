#include "votewire/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "votewire/stats.hpp"

namespace votewire::classify {

std::string_view ToString(UnclassifiedReason r) {
  switch (r) {
    case UnclassifiedReason::kNone: return "";
    case UnclassifiedReason::kBelowLow: return "below_low_range";
    case UnclassifiedReason::kGap: return "between_ranges";
    case UnclassifiedReason::kAboveHigh: return "above_high_range";
  }
  return "";
}

const TransmissionRecord& SelectFinalSession(std::span<const TransmissionRecord> sessions) {
  if (sessions.empty()) throw Error(ErrorCode::kNoSessions, "machine has no sessions");
  const TransmissionRecord* best = &sessions.front();
  for (const auto& s : sessions.subspan(1)) {
    if (s.session_stop > best->session_stop ||
        (s.session_stop == best->session_stop && s.call_index >= best->call_index)) {
      best = &s;
    }
  }
  return *best;
}

TrafficClass ClassifyMachine(const TransmissionRecord& final_session, const TrafficThresholds& t) {
  if (final_session.medium == Medium::kCellular) return TrafficClass::kCellular;
  const auto total = final_session.total_octets();
  if (total >= t.high_min && total <= t.high_max) return TrafficClass::kHighWire;
  if (total >= t.low_min && total <= t.low_max) return TrafficClass::kLowWire;
  return TrafficClass::kUnclassified;
}

UnclassifiedReason WhyUnclassified(const TransmissionRecord& final_session, const TrafficThresholds& t) {
  if (ClassifyMachine(final_session, t) != TrafficClass::kUnclassified) return UnclassifiedReason::kNone;
  const auto total = final_session.total_octets();
  if (total < t.low_min) return UnclassifiedReason::kBelowLow;
  if (total > t.high_max) return UnclassifiedReason::kAboveHigh;
  return UnclassifiedReason::kGap;
}

std::vector<MachineClassification> ClassifyMachines(std::span<const TransmissionRecord> records,
                                                    const TrafficThresholds& thresholds) {
  std::map<std::string, std::vector<TransmissionRecord>> by_machine;
  for (const auto& r : records) by_machine[r.machine_id].push_back(r);

  std::vector<MachineClassification> out;
  out.reserve(by_machine.size());
  for (const auto& [id, sessions] : by_machine) {
    MachineClassification m;
    m.machine_id = id;
    m.final_session = SelectFinalSession(sessions);
    m.center_id = m.final_session.center_id;
    m.traffic_class = ClassifyMachine(m.final_session, thresholds);
    m.reason = WhyUnclassified(m.final_session, thresholds);
    m.total_octets = m.final_session.total_octets();
    out.push_back(std::move(m));
  }
  return out;
}

CenterClassification ClassifyCenter(const std::string& center_id,
                                    std::span<const MachineClassification> members) {
  if (members.empty()) throw Error(ErrorCode::kEmptyInput, "center " + center_id + " has no machines");
  CenterClassification c;
  c.center_id = center_id;
  for (const auto& m : members) ++c.composition[ClassIndex(m.traffic_class)];

  // Tie-break order: earlier entries win equal counts.
  constexpr TrafficClass kPreference[] = {TrafficClass::kHighWire, TrafficClass::kLowWire,
                                          TrafficClass::kCellular};
  std::size_t best = 0;
  for (auto cls : kPreference) {
    if (c.composition[ClassIndex(cls)] > best) {
      best = c.composition[ClassIndex(cls)];
      c.center_class = cls;
    }
  }
  if (best == 0) {
    c.center_class = TrafficClass::kUnclassified;
    c.flags.all_unclassified = true;
  }
  c.flags.mixed_ab = c.composition[ClassIndex(TrafficClass::kHighWire)] > 0 &&
                     c.composition[ClassIndex(TrafficClass::kLowWire)] > 0;
  return c;
}

std::vector<CenterClassification> ClassifyCenters(std::span<const MachineClassification> machines) {
  std::map<std::string, std::vector<MachineClassification>> by_center;
  for (const auto& m : machines) by_center[m.center_id].push_back(m);
  std::vector<CenterClassification> out;
  out.reserve(by_center.size());
  for (const auto& [id, members] : by_center) out.push_back(ClassifyCenter(id, members));
  return out;
}

SubgroupSplit SplitHighSubgroups(std::span<const SubgroupPoint> points, const SubgroupConfig& config) {
  if (points.size() < 2) throw Error(ErrorCode::kTooFewPoints, "two-means needs at least two machines");

  double c1 = config.initial_g1;
  double c2 = config.initial_g2;
  std::vector<Subgroup> labels(points.size(), Subgroup::kG1);
  SubgroupSplit split;
  for (int iter = 1; iter <= config.max_iterations; ++iter) {
    bool changed = iter == 1;
    double sum1 = 0.0, sum2 = 0.0;
    std::size_t n1 = 0, n2 = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double x = points[i].output_octets;
      const Subgroup g = std::fabs(x - c1) <= std::fabs(x - c2) ? Subgroup::kG1 : Subgroup::kG2;
      if (g != labels[i]) changed = true;
      labels[i] = g;
      if (g == Subgroup::kG1) {
        sum1 += x;
        ++n1;
      } else {
        sum2 += x;
        ++n2;
      }
    }
    if (n1 == 0 || n2 == 0) {
      throw Error(ErrorCode::kDegenerate, "all high-traffic machines fall into one cloud");
    }
    c1 = sum1 / static_cast<double>(n1);
    c2 = sum2 / static_cast<double>(n2);
    split.count_g1 = n1;
    split.count_g2 = n2;
    split.iterations = iter;
    if (!changed) break;
  }
  if (std::fabs(c2 - c1) < config.min_gap) {
    throw Error(ErrorCode::kDegenerate, "cluster means " + std::to_string(c1) + " and " + std::to_string(c2) +
                                            " are closer than the minimum gap");
  }
  split.mean_g1 = c1;
  split.mean_g2 = c2;
  for (std::size_t i = 0; i < points.size(); ++i) split.labels[points[i].machine_id] = labels[i];
  return split;
}

SubgroupSplit AssignSubgroups(std::vector<MachineClassification>& machines, const SubgroupConfig& config) {
  std::vector<SubgroupPoint> points;
  for (const auto& m : machines) {
    if (m.traffic_class == TrafficClass::kHighWire) {
      points.push_back({m.machine_id, static_cast<double>(m.final_session.output_octets)});
    }
  }
  auto split = SplitHighSubgroups(points, config);
  for (auto& m : machines) {
    if (auto it = split.labels.find(m.machine_id); it != split.labels.end()) m.subgroup = it->second;
  }
  return split;
}

std::vector<CenterSubgroupCounts> HighCenterSubgroups(std::span<const MachineClassification> machines,
                                                      std::span<const CenterClassification> centers) {
  std::map<std::string, CenterSubgroupCounts> counts;
  for (const auto& c : centers) {
    if (c.center_class == TrafficClass::kHighWire) counts[c.center_id].center_id = c.center_id;
  }
  for (const auto& m : machines) {
    if (m.traffic_class != TrafficClass::kHighWire || !m.subgroup) continue;
    auto it = counts.find(m.center_id);
    if (it == counts.end()) continue;
    if (*m.subgroup == Subgroup::kG1) {
      ++it->second.g1;
    } else {
      ++it->second.g2;
    }
  }
  std::vector<CenterSubgroupCounts> out;
  for (auto& [_, c] : counts) {
    if (c.machines() > 0) out.push_back(std::move(c));
  }
  return out;
}

ProportionsOutcome MixedCenterProportionsTest(std::span<const CenterSubgroupCounts> centers, double p_superior) {
  if (centers.empty()) throw Error(ErrorCode::kEmptyInput, "no high-traffic centers with subgroup labels");
  if (!(p_superior >= 0.0 && p_superior <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "p_superior must lie in [0, 1]");
  }
  ProportionsOutcome out;
  for (const auto& c : centers) {
    const auto n = static_cast<double>(c.machines());
    const double all_g1 = std::pow(1.0 - p_superior, n);
    const double all_g2 = std::pow(p_superior, n);
    out.expected[static_cast<int>(CenterMix::kAllG1)] += all_g1;
    out.expected[static_cast<int>(CenterMix::kAllG2)] += all_g2;
    // A single machine cannot mix; avoid the 1 - (1 - p) - p rounding residue.
    if (c.machines() > 1) out.expected[static_cast<int>(CenterMix::kMixed)] += std::max(0.0, 1.0 - all_g1 - all_g2);
    if (c.g1 > 0 && c.g2 > 0) {
      ++out.observed[static_cast<int>(CenterMix::kMixed)];
    } else if (c.g2 == 0) {
      ++out.observed[static_cast<int>(CenterMix::kAllG1)];
    } else {
      ++out.observed[static_cast<int>(CenterMix::kAllG2)];
    }
  }

  constexpr double kZero = 1e-12;
  std::vector<double> observed, expected;
  bool impossible = false;
  for (std::size_t i = 0; i < 3; ++i) {
    if (out.expected[i] > kZero) {
      observed.push_back(static_cast<double>(out.observed[i]));
      expected.push_back(out.expected[i]);
    } else if (out.observed[i] > 0) {
      impossible = true;
    }
  }

  TestResult& r = out.test;
  if (impossible) {
    r.statistic = std::numeric_limits<double>::infinity();
    r.df = {static_cast<double>(std::max<std::size_t>(expected.size(), 2) - 1), std::nullopt};
    r.p_value = 0.0;
    r.degenerate = true;
  } else if (expected.size() < 2) {
    r.statistic = 0.0;
    r.df = {1.0, std::nullopt};
    r.p_value = 1.0;
    r.degenerate = true;
  } else {
    r = stats::ChiSquareGof(observed, expected);
    r.degenerate = expected.size() < 3;
  }
  r.test_name = "mixed_center_proportions";
  return out;
}

namespace {

struct BandFit {
  std::size_t count = 0;
  double intercept = 0.0;
};

// Intercept of the 2 * tau window over y - slope * x holding the most
// points, refined to the median of those points.
BandFit BestBand(std::span<const PatternPoint> points, double slope, double tau) {
  std::vector<double> r;
  r.reserve(points.size());
  for (const auto& p : points) r.push_back(p.bytes - slope * p.votes);
  std::sort(r.begin(), r.end());
  BandFit best;
  std::size_t at = 0;
  for (std::size_t lo = 0, hi = 0; hi < r.size(); ++hi) {
    while (r[hi] - r[lo] > 2.0 * tau) ++lo;
    if (hi - lo + 1 > best.count) {
      best.count = hi - lo + 1;
      at = lo;
    }
  }
  if (best.count > 0) {
    const auto mid = at + best.count / 2;
    best.intercept = best.count % 2 ? r[mid] : 0.5 * (r[mid - 1] + r[mid]);
  }
  return best;
}

double Median(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

PatternResult PerVotePatternShare(std::span<const PatternPoint> points, const PatternConfig& config) {
  if (points.size() < 10) throw Error(ErrorCode::kTooFewPoints, "pattern share needs at least ten machines");
  if (!(config.slope_step > 0.0) || config.slope_max < config.slope_min || !(config.tolerance >= 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "bad slope grid or tolerance");
  }
  std::vector<double> slopes;
  for (double s = config.slope_min; s <= config.slope_max + 1e-9; s += config.slope_step) slopes.push_back(s);
  const double tau = config.tolerance;

  // Base stage.
  std::vector<bool> base(points.size(), false);
  const BandFit flat = BestBand(points, 0.0, tau);
  std::size_t best_sloped = 0;
  for (double s : slopes) best_sloped = std::max(best_sloped, BestBand(points, s, tau).count);
  if (flat.count >= best_sloped) {
    for (std::size_t i = 0; i < points.size(); ++i) base[i] = std::fabs(points[i].bytes - flat.intercept) <= tau;
  }

  // Segment stage over the points outside the base, sorted by votes.
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!base[i]) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return points[a].votes < points[b].votes; });
  std::vector<double> xs;
  for (auto i : order) xs.push_back(points[i].votes);

  PatternResult result;
  result.flags.assign(points.size(), false);
  std::vector<double> residuals;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& anchor = points[order[k]];
    const auto lo = std::lower_bound(xs.begin(), xs.end(), anchor.votes - config.vote_window) - xs.begin();
    const auto hi = std::upper_bound(xs.begin(), xs.end(), anchor.votes + config.vote_window) - xs.begin();
    std::size_t best_support = 0;
    double best_shift = 0.0;
    for (double s : slopes) {
      residuals.clear();
      for (auto j = lo; j < hi; ++j) {
        const auto& p = points[order[j]];
        const double d = (p.bytes - anchor.bytes) - s * (p.votes - anchor.votes);
        if (std::fabs(d) <= tau) residuals.push_back(d);
      }
      if (residuals.size() > best_support) {
        best_support = residuals.size();
        best_shift = Median(residuals);
      }
    }
    // The refined line passes best_shift above the anchor.
    if (best_support >= config.min_support && std::fabs(best_shift) <= tau) {
      result.flags[order[k]] = true;
      ++result.flagged;
    }
  }
  result.fraction = static_cast<double>(result.flagged) / static_cast<double>(points.size());
  return result;
}

std::vector<MunicipalityRow> RegionalComposition(std::span<const CenterClassification> centers,
                                                 std::span<const VotingCenter> registry) {
  std::map<std::string, const VotingCenter*> by_id;
  for (const auto& c : registry) by_id[c.center_id] = &c;

  std::map<std::pair<std::string, std::string>, MunicipalityRow> rows;
  for (const auto& c : centers) {
    auto it = by_id.find(c.center_id);
    if (it == by_id.end()) throw Error(ErrorCode::kUnknownCenter, c.center_id);
    auto& row = rows[{it->second->state, it->second->municipality}];
    row.state = it->second->state;
    row.municipality = it->second->municipality;
    ++row.centers[ClassIndex(c.center_class)];
    ++row.total;
  }
  std::vector<MunicipalityRow> out;
  out.reserve(rows.size());
  for (auto& [_, row] : rows) {
    std::size_t best = 0;
    for (auto cls : kAllTrafficClasses) {
      if (row.centers[ClassIndex(cls)] > best) {
        best = row.centers[ClassIndex(cls)];
        row.plurality = cls;
      }
    }
    row.mixing_index = static_cast<double>(best) / static_cast<double>(row.total);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace votewire::classify
