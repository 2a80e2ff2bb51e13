#pragma once

#include <cmath>
#include <string>

#include <doctest.h>

#include "morl/momdp.hpp"
#include "morl/reward_vector.hpp"

namespace morl::testing {

inline EnvironmentPtr fig1() { return Environment::builtin("fig1-deterministic"); }
inline EnvironmentPtr fig3() { return Environment::builtin("fig3-bandit"); }

inline bool near(const RewardVector& a, const RewardVector& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > tol) return false;
  }
  return true;
}

// Smallest legal environment: one decision, one outcome, two objectives.
inline const char* kMinimalEnv = R"({
  "name": "minimal",
  "n_objectives": 2,
  "states": ["S", "T"],
  "terminals": ["T"],
  "initial": "S",
  "transitions": {"S": {"go": [[1.0, "T", [1, 0]]]}}
})";

// Three-step stochastic chain with interior rewards and a start distribution.
inline const char* kStochasticChain = R"({
  "name": "chain",
  "n_objectives": 2,
  "states": ["S0", "S1", "S2", "S3", "G", "F"],
  "terminals": ["G", "F"],
  "initial": [[0.75, "S0"], [0.25, "S1"]],
  "transitions": {
    "S0": {"left": [[0.5, "S1", [1, 0]], [0.5, "S2", [0, 1]]],
           "right": [[0.25, "S2", [0, 0]], [0.75, "S3", [1, 1]]]},
    "S1": {"left": [[1.0, "S2", [0, 2]]],
           "right": [[0.5, "G", [3, 0]], [0.5, "F", [0, 0]]]},
    "S2": {"left": [[0.5, "G", [2, 2]], [0.5, "S3", [0, -1]]],
           "right": [[1.0, "F", [1, 0]]]},
    "S3": {"left": [[0.5, "G", [4, -2]], [0.5, "F", [-1, 1]]],
           "right": [[1.0, "G", [1, 1]]]}
  }
})";

}  // namespace morl::testing
