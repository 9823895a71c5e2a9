#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "votewire/classify.hpp"
#include "votewire/ingest.hpp"
#include "votewire/simulate.hpp"
#include "votewire/stats.hpp"

using namespace votewire;
using namespace votewire::simulate;

TEST_CASE("splitmix64 reference outputs") {
  // First outputs for seed 0 and 1234567 of the published generator.
  Rng zero(0);
  CHECK(zero.NextU64() == 0xE220A8397B1DCDAFULL);
  CHECK(zero.NextU64() == 0x6E789E6AA1B965F4ULL);
  Rng r(1234567);
  CHECK(r.NextU64() == 6457827717110365317ULL);
  CHECK(r.NextU64() == 3203168211198807973ULL);
  CHECK(Fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(Fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("rng draws") {
  Rng rng(3, "draws");
  double sum = 0, sum2 = 0;
  const int n = 200000;
  std::map<std::uint64_t, int> faces;
  for (int i = 0; i < n; ++i) {
    const double z = rng.Normal();
    sum += z;
    sum2 += z * z;
    ++faces[rng.UniformInt(1, 6)];
    const double u = rng.Uniform();
    CHECK_FALSE((u < 0.0 || u >= 1.0));
  }
  CHECK(std::fabs(sum / n) < 0.01);
  CHECK(std::fabs(sum2 / n - 1.0) < 0.02);
  CHECK(faces.size() == 6);
  for (const auto& [face, count] : faces) CHECK(std::fabs(count / double(n) - 1.0 / 6) < 0.005);
  CHECK(Rng(5, "x").NextU64() == Rng(5, "x").NextU64());
  CHECK(Rng(5, "x").NextU64() != Rng(5, "y").NextU64());
}

TEST_CASE("model draws: per-vote slope and fixed tally correlation") {
  Rng rng(20040815, "model-check");
  std::vector<double> votes, fixed;
  for (int i = 0; i < 4000; ++i) {
    votes.push_back(static_cast<double>(rng.UniformInt(250, 600)));
    fixed.push_back(3000 + rng.Normal(0, 150));
  }
  CHECK(std::fabs(stats::Correlation(votes, fixed)) < 0.05);
}

TEST_CASE("scenario determinism and shape") {
  auto cfg = DefaultPack2004();
  cfg.scale = 0.05;
  const auto a = GenerateScenario(cfg);
  const auto b = GenerateScenario(cfg);
  CHECK(a.records == b.records);
  CHECK(a.tallies == b.tallies);
  CHECK(a.registry == b.registry);
  CHECK(WriteRadiusDetail(a.records) == WriteRadiusDetail(b.records));
  cfg.seed += 1;
  CHECK(GenerateScenario(cfg).records != a.records);

  for (const auto& c : a.registry) CHECK_NOTHROW(ValidateCenter(c));
  for (const auto& r : a.records) CHECK(r.session_stop >= r.session_start);
  for (const auto& t : a.tallies) {
    CHECK_FALSE(t.total_mismatch());
    CHECK_FALSE(t.over_registry());
  }
  // Truth agrees with the classifier on this clean scenario.
  const auto machines = classify::ClassifyMachines(a.records);
  REQUIRE(machines.size() == a.machines.size());
  std::size_t same = 0;
  for (std::size_t i = 0; i < machines.size(); ++i) {
    CHECK(machines[i].machine_id == a.machines[i].machine_id);
    same += machines[i].traffic_class == a.machines[i].traffic_class;
  }
  CHECK(same * 1000 >= machines.size() * 999);
}

TEST_CASE("generated NO% group means converge to the configured means") {
  // Machines share the politics of their center, so the groups are the
  // designed center classes and the effective sample size is the number of
  // centers.
  auto cfg = DefaultPack2004();
  cfg.scale = 0.5;
  const auto d = GenerateScenario(cfg);
  std::map<std::string, TrafficClass> designed;
  std::map<TrafficClass, std::size_t> centers;
  for (const auto& c : d.centers) {
    designed[c.center_id] = c.designed_class;
    ++centers[c.designed_class];
  }
  std::map<TrafficClass, std::vector<double>> no;
  for (const auto& t : d.tallies) {
    if (t.election == Election::kPRR2004 && t.yes_votes + t.no_votes > 0) {
      no[designed[t.center_id]].push_back(NoPercentage(t));
    }
  }
  for (std::size_t i = 0; i < 3; ++i) {
    const auto cls = static_cast<TrafficClass>(i);
    const auto& v = no[cls];
    REQUIRE(v.size() > 100);
    const double sigma = cfg.classes[i].no_share.std;
    CHECK(std::fabs(stats::Mean(v) - cfg.classes[i].no_share.mean) <= 3 * sigma / std::sqrt(double(centers[cls])));
  }
}

TEST_CASE("writers") {
  TransmissionRecord r;
  r.machine_id = "M1";
  r.center_id = "C1";
  r.session_start = 1092614400;
  r.session_stop = 1092614500;
  r.input_octets = 1;
  r.output_octets = 2;
  r.call_index = 1;
  const std::vector<TransmissionRecord> one{r};
  const auto text = WriteRadiusDetail(one);
  for (const char* attr : {"User-Name", "Calling-Station-Id", "NAS-IP-Address", "Acct-Session-Time",
                           "Acct-Input-Octets", "Acct-Output-Octets", "Acct-Input-Packets", "Acct-Output-Packets",
                           "Acct-Terminate-Cause"}) {
    CHECK(text.find(std::string("\t") + attr + " = ") != std::string::npos);
  }
  CHECK(WriteRadiusDetail(std::vector<TransmissionRecord>{}).empty());
  CHECK(WriteTallyCsv(std::vector<TallySheet>{}) == "machine_id,center_id,registered,yes,no,null,total,election_id\n");
  CHECK(ingest::ParseTallyCsv(WriteTallyCsv(std::vector<TallySheet>{})).tallies.empty());
}

TEST_CASE("calibration experiment") {
  CalibrationConfig quiet;
  quiet.sigma = 0;
  auto rep = CalibrationRun(quiet, 100000, 3);
  for (const auto& row : rep.rows) {
    CHECK(row.overhead == rep.rows[0].overhead);
    CHECK_FALSE(row.flagged);
  }
  CalibrationConfig noisy;
  noisy.injected_overhead["CAL-017"] = 10000;
  rep = CalibrationRun(noisy, 100000, 5);
  for (const auto& row : rep.rows) CHECK(row.flagged == (row.machine_id == "CAL-017"));
  rep = CalibrationRun(noisy, 0, 1);
  for (const auto& row : rep.rows) CHECK(row.overhead == static_cast<double>(row.octets[0]));
  CHECK(CalibrationRun(noisy, 0, 1).rows.size() == 50);
}

TEST_CASE("pattern group generator") {
  const auto g = GeneratePatternGroup(1, 2000, 0.275);
  CHECK(g.points.size() == 2000);
  std::size_t on = 0;
  for (bool b : g.truth) on += b;
  CHECK(on == 550);
}

TEST_CASE("config json") {
  const auto pack = DefaultPack2004();
  const auto back = ConfigFromJson(ConfigToJson(pack));
  CHECK(ConfigToJson(back) == ConfigToJson(pack));
  const auto custom = ConfigFromJson(R"({"seed": 7, "scale": 0.5, "poll_close": "2004-08-16T04:00:00Z"})");
  CHECK(custom.seed == 7);
  CHECK(custom.scale == 0.5);
  CHECK(custom.poll_close == 1092614400 + 4 * 3600);
  CHECK(custom.classes[0].incoming.slope == 47.11);
  auto code = [](const char* json) {
    try {
      ConfigFromJson(json);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;
  };
  CHECK(code(R"({"sead": 7})") == ErrorCode::kInvalidConfig);
  CHECK(code(R"({"scale": -1})") == ErrorCode::kInvalidConfig);
  CHECK(code(R"({"retry_rate": 1.5})") == ErrorCode::kInvalidConfig);
  CHECK(code(R"({"n_centers": [0, 0, 0]})") == ErrorCode::kInvalidConfig);
  CHECK(code("not json") == ErrorCode::kInvalidConfig);
}
