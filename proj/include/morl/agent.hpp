#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "morl/momdp.hpp"
#include "morl/policy.hpp"
#include "morl/reward_vector.hpp"
#include "morl/rng.hpp"
#include "morl/utility.hpp"

namespace morl {

/// How eligibility traces behave after an exploratory (non-greedy) action.
///  - Literal: traces decay by gamma*lambda only when the next action is the
///    greedy one, and are otherwise left untouched.
///  - WatkinsReset: decay when greedy, zero otherwise.
enum class TraceMode { Literal, WatkinsReset };

std::string_view to_string(TraceMode mode);
TraceMode trace_mode_from_string(std::string_view name);

struct AgentConfig {
  double alpha = 0.1;
  double gamma = 1.0;
  double lambda = 0.95;
  double epsilon0 = 0.1;
  std::size_t episodes = 500;
  RewardVector q_init{12.0, 0.0, 0.0};
  UtilitySpec utility = UtilitySpec::paper_nonlinear();
  TieBreak tie_break = TieBreak::Random;
  TraceMode trace_mode = TraceMode::Literal;
  double tol = kDefaultTieTolerance;

  void validate(std::size_t n_objectives) const;
};

/// Linear decay from epsilon0 at episode 0 to zero at `episodes`.
double epsilon_at(const AgentConfig& config, std::size_t episode);

/// Environment state paired with the reward accrued so far in the episode.
struct AugmentedState {
  StateId state = 0;
  RewardVector accrued;

  friend bool operator==(const AugmentedState&, const AugmentedState&) = default;
  friend std::partial_ordering operator<=>(const AugmentedState& lhs, const AugmentedState& rhs) {
    if (auto c = lhs.state <=> rhs.state; c != 0) return c;
    return lhs.accrued <=> rhs.accrued;
  }
};

struct ActionChoice {
  ActionId action = 0;  // exploratory action actually taken
  ActionId greedy = 0;  // a*, used for the TD target
};

using QTable = std::map<AugmentedState, std::vector<RewardVector>>;

/// Tabular multi-objective Q(lambda) with vector values, accrued-reward state
/// augmentation, replacing eligibility traces and epsilon-greedy exploration.
///
/// Random stream discipline: select_action always consumes three variates
/// (tie-break, explore coin, uniform action), a step consumes one, and an
/// episode start consumes one, so agents that differ only in tie-breaking see
/// identical environment randomness until their choices diverge.
class QLambdaAgent {
 public:
  QLambdaAgent(AgentConfig config, EnvironmentPtr env);

  const AgentConfig& config() const noexcept { return config_; }
  const Environment& environment() const noexcept { return *env_; }
  std::size_t episodes_completed() const noexcept { return episodes_completed_; }

  /// Terminal states read as zero; unseen non-terminal entries read as q_init.
  RewardVector q_value(const AugmentedState& s, ActionId a) const;
  std::vector<RewardVector> q_values(const AugmentedState& s) const;
  void set_q_value(const AugmentedState& s, ActionId a, RewardVector value);
  const QTable& q_table() const noexcept { return q_; }

  double trace(const AugmentedState& s, ActionId a) const;

  /// a* = tie-broken argmax of U(Q(s, .) + P) using the pre-drawn variate.
  ActionId greedy_action(const AugmentedState& s, double tie_variate) const;

  ActionChoice select_action(const AugmentedState& s, double epsilon, Rng& rng) const;

  /// Clears every eligibility trace.
  void begin_episode();

  /// One TD update. `next_choice` is empty when `next` is terminal. Returns
  /// the vector TD error.
  RewardVector learn_step(const AugmentedState& s, ActionId a, const RewardVector& reward,
                          const AugmentedState& next, bool next_terminal,
                          const std::optional<ActionChoice>& next_choice);

  /// Optional hook that replaces the exploratory action at a decision point;
  /// the greedy action is still computed for the TD target.
  using ActionOverride = std::function<std::optional<ActionId>(const AugmentedState&, std::size_t step)>;

  /// Runs one full episode and returns the total (undiscounted) reward.
  RewardVector run_episode(double epsilon, Rng& rng, const ActionOverride& override_action = {});

  /// Greedy policy from the start state(s) with P = 0, following every
  /// outcome with non-zero probability. Only the random strategy draws from
  /// `tie_rng`.
  PolicyMap extract_greedy_policy(Rng& tie_rng) const;

  /// CSV dump: state,accrued,action,q1..qn
  std::string dump_q_table() const;

 private:
  struct TraceEntry {
    AugmentedState key;
    ActionId action;
    double eligibility;
  };

  std::vector<RewardVector>& row(const AugmentedState& s);
  std::vector<RewardVector> value_vectors(const AugmentedState& s) const;

  AgentConfig config_;
  EnvironmentPtr env_;
  QTable q_;
  std::vector<TraceEntry> traces_;
  std::size_t episodes_completed_ = 0;
};

}  // namespace morl
