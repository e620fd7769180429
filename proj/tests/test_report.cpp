#include <doctest.h>

#include "mpcsim/report.hpp"

using namespace mpcsim;

TEST_CASE("reports serialize deterministically") {
  ExperimentReport a = cmd_elect(64, 8, 0.25, 0.5, 200, 42);
  ExperimentReport b = cmd_elect(64, 8, 0.25, 0.5, 200, 42);
  CHECK(a.to_json() == b.to_json());
  ExperimentReport c = cmd_elect(64, 8, 0.25, 0.5, 200, 43);
  CHECK(a.to_json() != c.to_json());  // the seed is part of the report
}

TEST_CASE("verdict logic uses only report fields") {
  ExperimentReport rep = cmd_elect(64, 8, 0.25, 0.5, 200, 42);
  for (auto& [name, ok] : rep.verdicts) CHECK(ok);
  CHECK(rep.all_pass());
  CHECK(rep.measured[0].second <= rep.bounds[0].second);
}

TEST_CASE("bin stuffing places corrupted parties after the honest loads") {
  // Honest loads: bin0 light. The stuffer should make some bin both bad and
  // winning whenever it can.
  std::vector<int> bins{-1, -1, 0, 1, 1, 1};
  std::vector<int> corrupted{0, 1};
  auto stuffed = stuff_bins(bins, 2, corrupted, 0.5);
  Committee c = feige_elect(6, 3, stuffed);
  size_t bad = intersect_sorted(c.members, corrupted).size();
  CHECK(static_cast<double>(bad) >= 0.5 * c.size());
}

TEST_CASE("uplift report: no adversary, single call") {
  ExperimentReport rep = cmd_uplift_cf(24, 6, 0.25, 0.5, "none", 300, 7);
  CHECK(rep.all_pass());
  double max_calls = 0;
  for (auto& [k, v] : rep.measured)
    if (k == "max_calls") max_calls = v;
  CHECK(max_calls == 1.0);
}

TEST_CASE("uplift report under scripted abort presets") {
  for (const char* preset : {"abort-fresh", "abort-alternate", "drop-bins",
                             "stale-abort"}) {
    ExperimentReport rep = cmd_uplift_cf(24, 6, 0.25, 0.5, preset, 300, 7);
    CHECK(rep.all_pass());
  }
}

TEST_CASE("or uplift report respects an honest one") {
  ExperimentReport rep =
      cmd_uplift_or(5, 256, 2.0, 0.5, /*inputs=*/0b10000, "abort", 50, 3);
  CHECK(rep.all_pass());
}

TEST_CASE("attack reports") {
  ExperimentReport toy = cmd_attack("toy2", "exact", 0, 1);
  CHECK(toy.all_pass());
  ExperimentReport pipeline = cmd_attack("hybrid6", "exact", 0, 1);
  CHECK(pipeline.all_pass());
  ExperimentReport honest = cmd_attack("honest", "exact", 0, 1);
  CHECK(honest.all_pass());
}

TEST_CASE("attack artifacts replay to the same bias") {
  ExperimentReport rep = cmd_attack("hybrid6", "exact", 0, 1);
  ExperimentReport replay = cmd_replay(rep.to_json());
  CHECK(replay.all_pass());
  double original = 0, replayed = -1;
  for (auto& [k, v] : rep.measured)
    if (k == "translated_bias") original = v;
  for (auto& [k, v] : replay.measured)
    if (k == "bias") replayed = v;
  CHECK(original == doctest::Approx(replayed));
}

TEST_CASE("subcommittee report at the headline parameters") {
  ExperimentReport rep = cmd_subcommittees(256, 2.0, 0.25, 100, 5);
  CHECK(rep.all_pass());
  double count = 0;
  for (auto& [k, v] : rep.measured)
    if (k == "subcommittees") count = v;
  CHECK(count == 1820.0);
}

TEST_CASE("subcommittee report rejects a phi below the committee constraint") {
  CHECK_THROWS_AS(cmd_subcommittees(256, 1.0, 0.4, 10, 5), SpecError);
}

TEST_CASE("per-trial csv rows on request") {
  ExperimentReport rep = cmd_elect(64, 8, 0.25, 0.5, 25, 3, /*want_rows=*/true);
  CHECK(rep.trial_rows.size() == 25);
  CHECK(rep.to_json().find("trials_csv") != std::string::npos);
  ExperimentReport bare = cmd_elect(64, 8, 0.25, 0.5, 25, 3);
  CHECK(bare.trial_rows.empty());
}

TEST_CASE("degenerate election cases") {
  // No corrupted parties: the bad-committee event cannot happen.
  ExperimentReport clean = cmd_elect(8, 4, 0.0, 0.5, 10, 1);
  CHECK(clean.measured[0].second == 0.0);
  // beta' = beta: the bound is n/n', trivially satisfied.
  ExperimentReport vacuous = cmd_elect(64, 8, 0.25, 0.25, 50, 1);
  CHECK(vacuous.bounds[0].second == doctest::Approx(8.0));
  CHECK(vacuous.all_pass());
}
