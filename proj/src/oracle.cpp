#include "morl/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "morl/error.hpp"

namespace morl {

std::vector<PolicyMap> enumerate_policies(const Environment& env) {
  if (!env.is_acyclic()) {
    fail(ErrorCode::Domain, "policy enumeration refused: environment \"" + env.name() + "\" contains a cycle");
  }
  std::set<PolicyMap> found;
  std::function<void(PolicyMap, std::set<StateId>)> expand = [&](PolicyMap partial, std::set<StateId> frontier) {
    if (frontier.empty()) {
      found.insert(std::move(partial));
      return;
    }
    const StateId s = *frontier.begin();
    frontier.erase(frontier.begin());
    for (ActionId a = 0; a < env.action_count(s); ++a) {
      PolicyMap next = partial;
      next.choices[s] = a;
      std::set<StateId> next_frontier = frontier;
      for (const auto& o : env.outcome_support(s, a)) {
        if (!env.is_terminal(o.next_state) && !next.choices.contains(o.next_state)) {
          next_frontier.insert(o.next_state);
        }
      }
      expand(std::move(next), std::move(next_frontier));
    }
  };
  std::set<StateId> starts;
  for (const auto& [p, s] : env.start_distribution()) {
    if (!env.is_terminal(s)) starts.insert(s);
  }
  expand(PolicyMap{}, starts);
  return {found.begin(), found.end()};
}

PolicyEvaluation evaluate_policy(const Environment& env, const PolicyMap& policy, const UtilitySpec& utility) {
  if (!utility.is_scalarisation()) {
    fail(ErrorCode::InvalidArgument, "policy evaluation needs a scalarisation utility");
  }
  utility.validate(env.n_objectives());
  if (!env.is_acyclic()) fail(ErrorCode::Domain, "exact evaluation needs an acyclic environment");

  PolicyEvaluation eval;
  std::function<void(StateId, double, const RewardVector&)> walk = [&](StateId s, double p, const RewardVector& acc) {
    if (env.is_terminal(s)) {
      eval.outcome_table.push_back({p, acc});
      return;
    }
    auto it = policy.choices.find(s);
    if (it == policy.choices.end()) {
      fail(ErrorCode::InvalidArgument, "policy has no choice for reachable state \"" + env.state_name(s) + "\"");
    }
    if (it->second >= env.action_count(s)) {
      fail(ErrorCode::InvalidArgument, "policy chooses an illegal action in state \"" + env.state_name(s) + "\"");
    }
    for (const auto& o : env.outcome_support(s, it->second)) walk(o.next_state, p * o.probability, acc + o.reward);
  };
  const RewardVector zero = RewardVector::zeros(env.n_objectives());
  for (const auto& [p, s] : env.start_distribution()) walk(s, p, zero);

  eval.mean_return = zero;
  eval.utility_esr = 0.0;
  for (const auto& row : eval.outcome_table) {
    eval.mean_return.add_scaled(row.total_return, row.probability);
    eval.utility_esr += row.probability * scalarise(utility, row.total_return);
  }
  eval.utility_ser = scalarise(utility, eval.mean_return);
  return eval;
}

std::size_t classify_policy(const std::vector<PolicyMap>& enumerated, const PolicyMap& policy) {
  auto it = std::lower_bound(enumerated.begin(), enumerated.end(), policy);
  if (it == enumerated.end() || *it != policy) fail(ErrorCode::Domain, "policy matches no enumerated policy");
  return static_cast<std::size_t>(it - enumerated.begin());
}

std::size_t classify_policy(const Environment& env, const PolicyMap& policy) {
  return classify_policy(enumerate_policies(env), policy);
}

std::string policy_table_csv(const Environment& env, const UtilitySpec& utility) {
  const auto policies = enumerate_policies(env);
  std::vector<StateId> decision_states;
  for (StateId s = 0; s < env.state_count(); ++s) {
    if (!env.is_terminal(s)) decision_states.push_back(s);
  }
  std::ostringstream out;
  out << "policy";
  for (StateId s : decision_states) out << ',' << env.state_name(s);
  for (std::size_t o = 0; o < env.n_objectives(); ++o) out << ",r" << (o + 1);
  out << ",utility_ser,utility_esr\n";
  for (std::size_t label = 0; label < policies.size(); ++label) {
    const auto& policy = policies[label];
    const auto eval = evaluate_policy(env, policy, utility);
    out << label;
    for (StateId s : decision_states) {
      auto it = policy.choices.find(s);
      out << ',' << (it == policy.choices.end() ? std::string("-") : env.action_name(s, it->second));
    }
    for (double v : eval.mean_return) out << ',' << format_double(v);
    out << ',' << format_double(eval.utility_ser) << ',' << format_double(eval.utility_esr) << '\n';
  }
  return out.str();
}

double segment_utility(double x) {
  if (!(x >= 0.0 && x <= 1.0)) fail(ErrorCode::Domain, "segment position must lie in [0,1]");
  return scalarise(UtilitySpec::paper_nonlinear(), RewardVector{7.0, -5.0 + 4.0 * x, -1.0 - 4.0 * x});
}

std::pair<double, double> preference_boundary() {
  const double root2 = std::sqrt(2.0);
  return {(2.0 - root2) / 4.0, (2.0 + root2) / 4.0};
}

}  // namespace morl
