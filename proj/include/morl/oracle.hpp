#pragma once

#include <string>
#include <utility>
#include <vector>

#include "morl/momdp.hpp"
#include "morl/policy.hpp"
#include "morl/reward_vector.hpp"
#include "morl/utility.hpp"

namespace morl {

struct PathOutcome {
  double probability = 0.0;
  RewardVector total_return;
};

struct PolicyEvaluation {
  RewardVector mean_return;
  double utility_ser = 0.0;
  double utility_esr = 0.0;
  std::vector<PathOutcome> outcome_table;  // one row per episode path, in enumeration order
};

/// Every distinct deterministic policy over reachable states, sorted
/// lexicographically by (state, action) choices. Throws Error(Domain) for
/// environments with cycles.
std::vector<PolicyMap> enumerate_policies(const Environment& env);

/// Exact episodic (undiscounted) evaluation by enumerating every outcome path.
PolicyEvaluation evaluate_policy(const Environment& env, const PolicyMap& policy, const UtilitySpec& utility);

/// Index of `policy` in enumerate_policies(env). Throws Error(Domain) when it
/// matches none.
std::size_t classify_policy(const Environment& env, const PolicyMap& policy);
std::size_t classify_policy(const std::vector<PolicyMap>& enumerated, const PolicyMap& policy);

/// CSV table: label, one column per decision state, mean return, SER, ESR.
std::string policy_table_csv(const Environment& env, const UtilitySpec& utility);

/// U(7, -5+4x, -1-4x) under the paper-nonlinear utility, i.e. 16x^2 - 16x + 9.
double segment_utility(double x);

/// Roots of 16x^2 - 16x + 2: the points on the segment where Q(A,a1) has the
/// same utility (7) as Q(A,a2).
std::pair<double, double> preference_boundary();

}  // namespace morl
