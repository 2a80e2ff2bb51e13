#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "morl/reward_vector.hpp"
#include "morl/rng.hpp"

namespace morl {

using StateId = std::size_t;
using ActionId = std::size_t;

// ---------------------------------------------------------------------------
// Declarative environment description. Names are kept as strings so that a
// malformed document can be represented and diagnosed before indexing.
// ---------------------------------------------------------------------------

struct Outcome {
  double probability = 0.0;
  std::string next_state;
  RewardVector reward;

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

struct ActionOutcomes {
  std::string action;
  std::vector<Outcome> outcomes;

  friend bool operator==(const ActionOutcomes&, const ActionOutcomes&) = default;
};

struct StateTransitions {
  std::string state;
  std::vector<ActionOutcomes> actions;

  friend bool operator==(const StateTransitions&, const StateTransitions&) = default;
};

struct StartEntry {
  double probability = 0.0;
  std::string state;

  friend bool operator==(const StartEntry&, const StartEntry&) = default;
};

struct MomdpSpec {
  std::string name;
  std::size_t n_objectives = 0;
  std::vector<std::string> states;
  std::vector<std::string> terminals;
  /// Start distribution. A point start is a single entry with probability 1
  /// and `point_start` set, which serializes as a bare state name.
  std::vector<StartEntry> initial;
  bool point_start = true;
  /// Non-terminal states with their actions, both in declaration order.
  std::vector<StateTransitions> transitions;

  friend bool operator==(const MomdpSpec&, const MomdpSpec&) = default;
};

struct Diagnostic {
  std::string invariant;  // e.g. "probability-sum", "dangling-state"
  std::string location;   // e.g. "transitions/B/a1"
  std::string message;
};

/// Checks every structural invariant; an empty result means the spec is valid.
std::vector<Diagnostic> validate_momdp(const MomdpSpec& spec);

/// Parses the JSON environment document. Throws Error(Parse) on malformed
/// JSON and Error(Schema) on missing fields, wrong types or failed validation.
MomdpSpec parse_momdp(std::string_view document);
/// Structural parse only; the result may violate spec invariants.
MomdpSpec parse_momdp_unvalidated(std::string_view document);
MomdpSpec load_momdp(const std::filesystem::path& path);

/// Canonical document: declaration order, two-space indentation, trailing newline.
std::string serialize_momdp(const MomdpSpec& spec);

/// "fig1-deterministic" or "fig3-bandit".
MomdpSpec builtin_spec(std::string_view name);
std::vector<std::string> builtin_names();

// ---------------------------------------------------------------------------
// Indexed, validated, immutable environment used by agents and the oracle.
// ---------------------------------------------------------------------------

struct IndexedOutcome {
  double probability = 0.0;
  StateId next_state = 0;
  RewardVector reward;
};

struct StepOutcome {
  StateId next_state = 0;
  RewardVector reward;
  bool is_terminal = false;
};

class Environment {
 public:
  /// Throws Error(Schema) listing every diagnostic when the spec is invalid.
  static std::shared_ptr<const Environment> create(MomdpSpec spec);
  static std::shared_ptr<const Environment> builtin(std::string_view name);
  /// Built-in name or path to a JSON document.
  static std::shared_ptr<const Environment> resolve(std::string_view name_or_path);

  const MomdpSpec& spec() const noexcept { return spec_; }
  const std::string& name() const noexcept { return spec_.name; }
  std::size_t n_objectives() const noexcept { return spec_.n_objectives; }

  std::size_t state_count() const noexcept { return state_names_.size(); }
  const std::string& state_name(StateId s) const { return state_names_.at(s); }
  StateId state_id(std::string_view name) const;
  bool is_terminal(StateId s) const { return terminal_.at(s); }

  std::size_t action_count(StateId s) const { return actions_.at(s).size(); }
  const std::string& action_name(StateId s, ActionId a) const;
  ActionId action_id(StateId s, std::string_view name) const;

  std::span<const std::pair<double, StateId>> start_distribution() const noexcept { return start_; }

  /// Declared outcome list for (s, a), verbatim and in declared order.
  std::span<const IndexedOutcome> outcome_support(StateId s, ActionId a) const;

  /// Inverse-CDF draw over the declared outcome order. Consumes exactly one
  /// variate from `rng`.
  StepOutcome sample_step(StateId s, ActionId a, Rng& rng) const;
  StepOutcome step_with_variate(StateId s, ActionId a, double u) const;

  /// Start state draw; consumes exactly one variate even for a point start.
  StateId sample_start(Rng& rng) const;

  /// True when no state can reach itself through declared transitions.
  bool is_acyclic() const;

 private:
  explicit Environment(MomdpSpec spec);

  void require_decision(StateId s, ActionId a) const;

  MomdpSpec spec_;
  std::vector<std::string> state_names_;
  std::unordered_map<std::string, StateId> state_index_;
  std::vector<bool> terminal_;
  std::vector<std::vector<std::string>> actions_;
  std::vector<std::vector<std::vector<IndexedOutcome>>> outcomes_;
  std::vector<std::pair<double, StateId>> start_;
};

using EnvironmentPtr = std::shared_ptr<const Environment>;

}  // namespace morl
