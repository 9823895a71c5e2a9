#include <cmath>

#include "doctest.h"
#include "votewire/core.hpp"
#include "votewire/simulate.hpp"

using namespace votewire;

namespace {

TallySheet Referendum(std::uint64_t yes, std::uint64_t no) {
  TallySheet t;
  t.machine_id = "M001";
  t.center_id = "C01";
  t.yes_votes = yes;
  t.no_votes = no;
  t.total_votes = yes + no;
  t.registered_voters = 1000;
  return t;
}

TallySheet Candidates(std::uint64_t chavez, std::uint64_t others, std::uint64_t null) {
  TallySheet t;
  t.election = Election::kE2000;
  t.candidate_votes = {{"chavez", chavez}, {"others", others}};
  t.null_votes = null;
  t.total_votes = chavez + others + null;
  t.registered_voters = 1000;
  return t;
}

template <typename F>
ErrorCode CodeOf(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kIo;
}

}  // namespace

TEST_CASE("no percentage") {
  CHECK(NoPercentage(Referendum(155, 155)) == 50.0);
  CHECK(NoPercentage(Referendum(0, 7)) == 100.0);
  CHECK(CodeOf([] { NoPercentage(Referendum(0, 0)); }) == ErrorCode::kZeroBallots);
}

TEST_CASE("abstention percentage") {
  TallySheet t = Referendum(300, 400);
  CHECK(AbstentionPercentage(t) == doctest::Approx(30.0));
  t = Referendum(500, 500);
  CHECK(AbstentionPercentage(t) == 0.0);
  t.registered_voters = 0;
  t.total_votes = 0;
  CHECK(CodeOf([&] { AbstentionPercentage(t); }) == ErrorCode::kZeroRegistry);
}

TEST_CASE("candidate percentage") {
  CHECK(CandidatePercentage(Candidates(50, 30, 20), "chavez", VoteBasis::kValidOnly) == doctest::Approx(62.5));
  CHECK(CandidatePercentage(Candidates(50, 30, 20), "chavez", VoteBasis::kTotalWithNulls) == doctest::Approx(50.0));
  CHECK(CandidatePercentage(Candidates(0, 10, 0), "chavez", VoteBasis::kValidOnly) == 0.0);
  CHECK(CandidatePercentage(Candidates(0, 10, 0), "chavez", VoteBasis::kTotalWithNulls) == 0.0);
  CHECK(CodeOf([] { CandidatePercentage(Candidates(1, 1, 0), "nobody", VoteBasis::kValidOnly); }) ==
        ErrorCode::kUnknownOption);
}

TEST_CASE("property: yes and no shares sum to 100, bases agree without nulls") {
  simulate::Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    const auto yes = rng.UniformInt(0, 1000), no = rng.UniformInt(0, 1000);
    if (yes + no == 0) continue;
    const auto t = Referendum(yes, no);
    CHECK(std::fabs(NoPercentage(t) + YesPercentage(t) - 100.0) <= 1e-12);
    const auto c = Candidates(rng.UniformInt(0, 500), rng.UniformInt(1, 500), 0);
    CHECK(CandidatePercentage(c, "chavez", VoteBasis::kValidOnly) ==
          CandidatePercentage(c, "chavez", VoteBasis::kTotalWithNulls));
  }
}

TEST_CASE("tally anomaly flags") {
  TallySheet t = Referendum(194, 306);
  t.registered_voters = 520;
  CHECK_FALSE(t.total_mismatch());
  CHECK_FALSE(t.over_registry());
  t.total_votes = 501;
  CHECK(t.total_mismatch());
  t.registered_voters = 400;
  CHECK(t.over_registry());
}

TEST_CASE("center validation") {
  VotingCenter c{"C01", "P1", "M1", "S1", {"M01"}};
  CHECK_NOTHROW(ValidateCenter(c));
  c.machine_ids.clear();
  CHECK(CodeOf([&] { ValidateCenter(c); }) == ErrorCode::kInvalidConfig);
  c.machine_ids.assign(19, "M");
  CHECK(CodeOf([&] { ValidateCenter(c); }) == ErrorCode::kInvalidConfig);
  c.machine_ids.assign(18, "M");
  CHECK_NOTHROW(ValidateCenter(c));
  c.state = "";
  CHECK(CodeOf([&] { ValidateCenter(c); }) == ErrorCode::kInvalidConfig);
}

TEST_CASE("names round trip") {
  for (auto c : kAllTrafficClasses) CHECK(ParseTrafficClass(ToString(c)) == c);
  for (auto e : {Election::kE1998, Election::kE2000, Election::kPRR2004}) CHECK(ParseElection(ToString(e)) == e);
  for (auto g : {Subgroup::kG1, Subgroup::kG2}) CHECK(ParseSubgroup(ToString(g)) == g);
  for (auto m : {Medium::kWire, Medium::kCellular}) CHECK(ParseMedium(ToString(m)) == m);
  CHECK_FALSE(ParseTrafficClass("D").has_value());
}
