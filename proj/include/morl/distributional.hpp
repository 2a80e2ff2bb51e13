#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "morl/momdp.hpp"
#include "morl/reward_vector.hpp"
#include "morl/rng.hpp"
#include "morl/utility.hpp"

namespace morl {

enum class Criterion { ESR, SER };

std::string_view to_string(Criterion c);
Criterion criterion_from_string(std::string_view name);

/// Exact categorical distribution over observed return vectors.
class ReturnDistribution {
 public:
  explicit ReturnDistribution(std::size_t n_objectives) : n_objectives_(n_objectives) {}

  void observe(const RewardVector& r);

  std::size_t n_objectives() const noexcept { return n_objectives_; }
  std::uint64_t total() const noexcept { return total_; }
  bool empty() const noexcept { return total_ == 0; }
  const std::map<RewardVector, std::uint64_t>& counts() const noexcept { return counts_; }

  /// count(r) / total, or 0 for an unseen atom.
  double probability(const RewardVector& r) const;
  RewardVector mean() const;

 private:
  std::size_t n_objectives_;
  std::map<RewardVector, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// ESR: sum_i p_i U(r_i). SER: U(sum_i p_i r_i).
double estimate_utility(const ReturnDistribution& dist, const UtilitySpec& spec, Criterion criterion);

/// Argmax of estimate_utility over actions, ties resolved by `tie`.
std::size_t greedy_action(std::span<const ReturnDistribution> dists, const UtilitySpec& spec, Criterion criterion,
                          TieBreak tie, double tol, Rng& rng);

inline std::size_t greedy_esr_action(std::span<const ReturnDistribution> dists, const UtilitySpec& spec,
                                     TieBreak tie, double tol, Rng& rng) {
  return greedy_action(dists, spec, Criterion::ESR, tie, tol, rng);
}

struct BanditConfig {
  std::string env = "fig3-bandit";
  Criterion criterion = Criterion::ESR;
  std::size_t warmup = 100;
  std::size_t pulls = 10000;
  UtilitySpec utility = UtilitySpec::paper_nonlinear();
  TieBreak tie_break = TieBreak::LowIndex;
  double tol = kDefaultTieTolerance;
  std::uint64_t seed = 1;
};

struct BanditRun {
  std::vector<ReturnDistribution> distributions;  // one per action of the start state
  std::size_t final_greedy = 0;                    // greedy action under the configured criterion
  std::string trace_csv;
};

/// Distributional learner on a single-decision environment: round-robin pulls
/// for `warmup` pulls, then greedy under the configured criterion. Every pull
/// consumes one tie-break variate and one environment variate.
BanditRun run_bandit(const Environment& env, const BanditConfig& config);

}  // namespace morl
