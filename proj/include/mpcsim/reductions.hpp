#pragma once

#include "mpcsim/engine.hpp"

namespace mpcsim {

// ---------------------------------------------------------------------------
// Parameters of the committee reductions. Logs are base 2; fractional counts
// round up so the claimed inequalities survive rounding.

struct ReductionConfig {
  int n = 0;
  double beta = 0.0;
  double beta_prime = 0.0;
  int kappa = 256;
  double phi = 2.0;

  int t() const { return static_cast<int>(beta * n); }
  int m() const;         // committee size, min(n, ceil(phi * log2 kappa))
  int n_second() const;  // ceil(log2 kappa / phi), kept below m
  int n_prime() const { return m() - n_second(); }
  int t_prime() const { return static_cast<int>(beta_prime * n_prime()); }

  // Claim constraints: honest majority per sub-committee needs
  // phi > 1/sqrt(1-2*beta_prime); honest presence needs phi > 1/sqrt(1-beta_prime).
  void validate(bool honest_majority) const;
};

// err(n, n', beta, beta') = (n/n') * exp(-(b'-b)^2 n' / (2(1-b))).
double err_bound(int n, int n_prime, double beta, double beta_prime);

// ---------------------------------------------------------------------------
// Feige's lightest-bin election. bins[i] in [0, ceil(n/n')), or -1 for a
// party that broadcast nothing (it cannot be elected). Ties break toward the
// lowest bin index.
int feige_bin_count(int n, int n_prime);
Committee feige_elect(int n, int n_prime, const std::vector<int>& bins);
Committee feige_elect_random(int n, int n_prime, RngStream& rng);

// All subsets of `committee` of size |committee| - n_second, lexicographic.
std::vector<Committee> enumerate_subcommittees(const Committee& committee,
                                               int n_second,
                                               uint64_t cap = 2'000'000);
// Claim bound on the sub-committee count: kappa^(log2(e) * (2/e + 1/phi)).
double subcommittee_count_bound(int kappa, double phi);
uint64_t binomial(uint64_t n, uint64_t k);

// Per-trial assertions behind the sub-committee claims.
bool subcommittees_honest_majority(const std::vector<Committee>& subs,
                                   const std::vector<int>& corrupted);
bool subcommittees_honest_presence(const std::vector<Committee>& subs,
                                   const std::vector<int>& corrupted);

// ---------------------------------------------------------------------------
// Player elimination: up to t'+1 sequential fair calls with restricted
// identifiable abort; a revealed party leaves the committee, the lowest-index
// remaining member simulating it from then on. An abort naming an
// already-eliminated party is charged to that simulator, which is only
// possible when the simulator itself is corrupted.
ProtocolSpec make_player_elimination(int n, const Committee& committee,
                                     int t_prime, FunctionalitySpec f,
                                     std::vector<Value> inputs = {});
ExecutionResult run_player_elimination(const ProtocolSpec& spec,
                                       const AdversaryStrategy& adv,
                                       uint64_t seed);

// Lightest-bin election round followed by player elimination over an ideal
// fair-with-identifiable-abort coin flip; the full no-input uplift.
ProtocolSpec make_coinflip_uplift(int n, int n_prime, double beta_prime);

// Parallel sub-committee iteration: each round one call with restricted
// identifiable (fair) abort parametrized by every sub-committee of the
// current committee; aborting costs one fresh identity per sub-committee.
ProtocolSpec make_parallel_subcommittees(int n, const Committee& committee,
                                         int n_second, int max_iterations,
                                         FunctionalitySpec f,
                                         bool fair = true,
                                         std::vector<Value> inputs = {});

// ---------------------------------------------------------------------------
// Compilers.

// Fair protocol for a no-input f on committee C into fairness with
// C-identifiable abort for all n parties: committed randomness, ideal inner
// call, then per-member correctness proofs of the claimed output.
ProtocolSpec compile_fair_to_ridfair_noinput(int n, const Committee& committee,
                                             FunctionalitySpec inner);

// Security-with-abort (identifiable) computation of the share-the-output
// variant of f, run by each committee in parallel; abort notices are counted
// per committee and the lowest surviving committee's broadcast shares
// reconstruct the output.
ProtocolSpec compile_abort_to_ridfair_hm(
    int n, const std::vector<Committee>& committees, int t_prime,
    std::function<uint64_t(const std::vector<uint64_t>&)> f, bool coin_output,
    std::vector<Value> inputs = {});

// With-input compiler: committed XOR-shared inputs with cross-committee
// consistency proofs, committed randomness, an ideal fair inner call per
// committee computing the verify-reconstruct-compute functionality, and
// per-member output proofs.
ProtocolSpec compile_fair_to_ridfair_withinput(
    int n, const std::vector<Committee>& committees,
    std::function<uint64_t(const std::vector<uint64_t>&)> f,
    std::vector<uint64_t> input_bits);

// ---------------------------------------------------------------------------
// Appendix partition protocols: disjoint committees of size 2t+1 computed
// with fairness and restricted (unidentified) abort.
// Sequential: t calls then an honest fallback party finishes alone.
// Parallel: a single call with t+1 committees; abort is impossible.
ProtocolSpec make_partition_sequential(int n, int t,
                                       std::function<uint64_t(const std::vector<uint64_t>&)> f,
                                       std::vector<uint64_t> input_bits);
ProtocolSpec make_partition_parallel(int n, int t,
                                     std::function<uint64_t(const std::vector<uint64_t>&)> f,
                                     std::vector<uint64_t> input_bits);
std::vector<Committee> partition_committees(int n, int t, int count);

// ---------------------------------------------------------------------------
// Committed OR: commitments, election (skipped when the committee would be
// the whole party set), then iterated two-phase committed-OR calls with
// restricted identifiable abort over all sub-committees; identified aborters
// and invalid openers drop out between iterations.
struct CommittedOrConfig {
  int n = 0;
  int m = 0;         // committee size
  int n_second = 0;  // sub-committee complement size
  int max_iterations = 0;
  double beta_prime = 0.0;  // election bound when m < n
};
CommittedOrConfig committed_or_config(int n, int kappa, double phi,
                                      double beta_prime);
ProtocolSpec make_committed_or(const CommittedOrConfig& cfg,
                               std::vector<uint64_t> input_bits);

}  // namespace mpcsim
