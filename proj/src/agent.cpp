#include "morl/agent.hpp"

#include <sstream>

#include "morl/error.hpp"

namespace morl {

std::string_view to_string(TraceMode mode) {
  return mode == TraceMode::Literal ? "literal" : "watkins-reset";
}

TraceMode trace_mode_from_string(std::string_view name) {
  if (name == "literal") return TraceMode::Literal;
  if (name == "watkins-reset") return TraceMode::WatkinsReset;
  fail(ErrorCode::InvalidArgument, "unknown trace mode \"" + std::string(name) + "\"");
}

void AgentConfig::validate(std::size_t n_objectives) const {
  auto bad = [](const std::string& what) { fail(ErrorCode::InvalidArgument, "agent config: " + what); };
  if (!(alpha > 0.0 && alpha <= 1.0)) bad("alpha must lie in (0,1]");
  if (!(gamma >= 0.0 && gamma <= 1.0)) bad("gamma must lie in [0,1]");
  if (!(lambda >= 0.0 && lambda <= 1.0)) bad("lambda must lie in [0,1]");
  if (!(epsilon0 >= 0.0 && epsilon0 <= 1.0)) bad("epsilon0 must lie in [0,1]");
  if (episodes == 0) bad("episodes must be positive");
  if (!(tol >= 0.0)) bad("tol must be non-negative");
  if (q_init.size() != n_objectives) {
    bad("q_init has " + std::to_string(q_init.size()) + " entries, expected " + std::to_string(n_objectives));
  }
  if (!q_init.is_finite()) bad("q_init must be finite");
  utility.validate(n_objectives);
}

double epsilon_at(const AgentConfig& config, std::size_t episode) {
  if (episode > config.episodes) {
    fail(ErrorCode::InvalidArgument, "episode " + std::to_string(episode) + " outside [0, " +
                                         std::to_string(config.episodes) + "]");
  }
  return config.epsilon0 * (1.0 - static_cast<double>(episode) / static_cast<double>(config.episodes));
}

QLambdaAgent::QLambdaAgent(AgentConfig config, EnvironmentPtr env) : config_(std::move(config)), env_(std::move(env)) {
  if (!env_) fail(ErrorCode::InvalidArgument, "agent needs an environment");
  config_.validate(env_->n_objectives());
}

RewardVector QLambdaAgent::q_value(const AugmentedState& s, ActionId a) const {
  if (env_->is_terminal(s.state)) return RewardVector::zeros(env_->n_objectives());
  if (a >= env_->action_count(s.state)) fail(ErrorCode::InvalidArgument, "action index out of range");
  auto it = q_.find(s);
  return it == q_.end() ? config_.q_init : it->second[a];
}

std::vector<RewardVector> QLambdaAgent::q_values(const AugmentedState& s) const {
  std::vector<RewardVector> out;
  for (ActionId a = 0; a < env_->action_count(s.state); ++a) out.push_back(q_value(s, a));
  return out;
}

void QLambdaAgent::set_q_value(const AugmentedState& s, ActionId a, RewardVector value) {
  if (env_->is_terminal(s.state)) fail(ErrorCode::InvalidArgument, "terminal values are fixed at zero");
  if (value.size() != env_->n_objectives()) fail(ErrorCode::InvalidArgument, "Q-value arity mismatch");
  row(s).at(a) = std::move(value);
}

std::vector<RewardVector>& QLambdaAgent::row(const AugmentedState& s) {
  auto it = q_.find(s);
  if (it == q_.end()) {
    it = q_.emplace(s, std::vector<RewardVector>(env_->action_count(s.state), config_.q_init)).first;
  }
  return it->second;
}

double QLambdaAgent::trace(const AugmentedState& s, ActionId a) const {
  for (const auto& t : traces_) {
    if (t.action == a && t.key == s) return t.eligibility;
  }
  return 0.0;
}

std::vector<RewardVector> QLambdaAgent::value_vectors(const AugmentedState& s) const {
  std::vector<RewardVector> values = q_values(s);
  for (auto& v : values) v += s.accrued;
  return values;
}

ActionId QLambdaAgent::greedy_action(const AugmentedState& s, double tie_variate) const {
  if (env_->is_terminal(s.state)) fail(ErrorCode::InvalidArgument, "no action selection in a terminal state");
  const auto values = value_vectors(s);
  const auto candidates = greedy_set(values, config_.utility, config_.tol);
  return break_tie_with(candidates, config_.tie_break, tie_variate);
}

ActionChoice QLambdaAgent::select_action(const AugmentedState& s, double epsilon, Rng& rng) const {
  const double tie_u = rng.uniform();
  const double coin_u = rng.uniform();
  const double action_u = rng.uniform();
  ActionChoice choice;
  choice.greedy = greedy_action(s, tie_u);
  choice.action = coin_u < epsilon ? Rng::index_from(action_u, env_->action_count(s.state)) : choice.greedy;
  return choice;
}

void QLambdaAgent::begin_episode() { traces_.clear(); }

RewardVector QLambdaAgent::learn_step(const AugmentedState& s, ActionId a, const RewardVector& reward,
                                      const AugmentedState& next, bool next_terminal,
                                      const std::optional<ActionChoice>& next_choice) {
  const std::size_t n = env_->n_objectives();
  if (reward.size() != n || s.accrued.size() != n || next.accrued.size() != n) {
    fail(ErrorCode::InvalidArgument, "learn_step arity mismatch");
  }
  if (!next_terminal && !next_choice) fail(ErrorCode::InvalidArgument, "non-terminal transition needs a next action");

  RewardVector delta = reward;
  if (!next_terminal) delta.add_scaled(q_value(next, next_choice->greedy), config_.gamma);
  delta -= q_value(s, a);

  bool found = false;
  for (auto& t : traces_) {
    if (t.action == a && t.key == s) {
      t.eligibility = 1.0;
      found = true;
    }
  }
  if (!found) traces_.push_back({s, a, 1.0});

  const bool on_greedy_path = next_terminal || next_choice->action == next_choice->greedy;
  const double decay = config_.gamma * config_.lambda;
  for (auto& t : traces_) {
    if (t.eligibility == 0.0) continue;
    row(t.key)[t.action].add_scaled(delta, config_.alpha * t.eligibility);
    if (on_greedy_path) {
      t.eligibility *= decay;
    } else if (config_.trace_mode == TraceMode::WatkinsReset) {
      t.eligibility = 0.0;
    }
  }
  return delta;
}

RewardVector QLambdaAgent::run_episode(double epsilon, Rng& rng, const ActionOverride& override_action) {
  const std::size_t n = env_->n_objectives();
  begin_episode();
  RewardVector accrued = RewardVector::zeros(n);
  AugmentedState current{env_->sample_start(rng), accrued};
  if (env_->is_terminal(current.state)) {
    ++episodes_completed_;
    return accrued;
  }

  std::size_t step = 0;
  auto choose = [&](const AugmentedState& s) {
    ActionChoice c = select_action(s, epsilon, rng);
    if (override_action) {
      if (auto forced = override_action(s, step)) c.action = *forced;
    }
    return c;
  };

  ActionChoice choice = choose(current);
  while (true) {
    const StepOutcome out = env_->sample_step(current.state, choice.action, rng);
    accrued += out.reward;
    AugmentedState next{out.next_state, accrued};
    ++step;
    std::optional<ActionChoice> next_choice;
    if (!out.is_terminal) next_choice = choose(next);
    learn_step(current, choice.action, out.reward, next, out.is_terminal, next_choice);
    if (out.is_terminal) break;
    current = std::move(next);
    choice = *next_choice;
  }
  ++episodes_completed_;
  return accrued;
}

PolicyMap QLambdaAgent::extract_greedy_policy(Rng& tie_rng) const {
  PolicyMap policy;
  std::function<void(const AugmentedState&)> visit = [&](const AugmentedState& s) {
    if (env_->is_terminal(s.state) || policy.choices.contains(s.state)) return;
    const auto candidates = greedy_set(value_vectors(s), config_.utility, config_.tol);
    const ActionId a = break_tie(candidates, config_.tie_break, tie_rng);
    policy.choices.emplace(s.state, a);
    for (const auto& o : env_->outcome_support(s.state, a)) {
      visit(AugmentedState{o.next_state, s.accrued + o.reward});
    }
  };
  for (const auto& [p, start] : env_->start_distribution()) {
    visit(AugmentedState{start, RewardVector::zeros(env_->n_objectives())});
  }
  return policy;
}

std::string QLambdaAgent::dump_q_table() const {
  std::ostringstream out;
  out << "state,accrued,action";
  for (std::size_t o = 0; o < env_->n_objectives(); ++o) out << ",q" << (o + 1);
  out << '\n';
  for (const auto& [key, values] : q_) {
    std::string accrued;
    for (std::size_t o = 0; o < key.accrued.size(); ++o) {
      if (o > 0) accrued += ' ';
      accrued += format_double(key.accrued[o]);
    }
    for (ActionId a = 0; a < values.size(); ++a) {
      out << env_->state_name(key.state) << ',' << accrued << ',' << env_->action_name(key.state, a);
      for (double v : values[a]) out << ',' << format_double(v);
      out << '\n';
    }
  }
  return out.str();
}

std::string describe(const Environment& env, const PolicyMap& policy) {
  std::string out = "{";
  bool first = true;
  for (const auto& [s, a] : policy.choices) {
    if (!first) out += ", ";
    first = false;
    out += env.state_name(s) + ":" + env.action_name(s, a);
  }
  out += "}";
  return out;
}

}  // namespace morl
