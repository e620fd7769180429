#pragma once

#include <string>

#include "mpcsim/adversaries.hpp"
#include "mpcsim/reductions.hpp"

namespace mpcsim {

// Deterministic experiment record: identical (id, parameters, seed) produce
// byte-identical JSON. Wall-clock timing therefore stays in the human table
// and never enters the report.
struct ExperimentReport {
  std::string id;
  uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<std::pair<std::string, double>> measured;
  std::vector<std::pair<std::string, double>> bounds;
  std::vector<std::pair<std::string, bool>> verdicts;
  std::string artifact_json;  // replayable attack artifacts, when any
  std::vector<std::string> trial_rows;  // CSV lines when requested

  bool all_pass() const;
  std::string to_json() const;
  std::string to_table(double wall_seconds) const;
};

// Worst-case rushing bin stuffing: after seeing the honest loads, place the
// corrupted parties so that, whenever feasible, a bin with corrupted
// fraction >= beta_prime wins the election; leftovers hide in the heaviest
// bin. Returns a full bin vector (honest entries copied through).
std::vector<int> stuff_bins(const std::vector<int>& bins, int k,
                            const std::vector<int>& corrupted,
                            double beta_prime);

ExperimentReport cmd_elect(int n, int n_prime, double beta, double beta_prime,
                           int trials, uint64_t seed, bool want_rows = false);

// Scripted fail-stop adversaries for the coin-flip uplift.
extern const char* const kUpliftPresets[5];
AdversaryStrategy uplift_adversary(const std::string& preset, int n,
                                   double beta);
ExperimentReport cmd_uplift_cf(int n, int n_prime, double beta,
                               double beta_prime, const std::string& preset,
                               int trials, uint64_t seed);
ExperimentReport cmd_uplift_or(int n, int kappa, double phi, double beta_prime,
                               uint64_t inputs_mask, const std::string& preset,
                               int trials, uint64_t seed);

ExperimentReport cmd_attack(const std::string& preset, const std::string& mode,
                            int trials, uint64_t seed);
ExperimentReport cmd_replay(const std::string& report_json);

ExperimentReport cmd_subcommittees(int kappa, double phi, double beta_prime,
                                   int trials, uint64_t seed);

}  // namespace mpcsim
