#pragma once

#include <map>
#include <string>

#include "morl/momdp.hpp"

namespace morl {

/// Deterministic policy restricted to the non-terminal states it reaches.
struct PolicyMap {
  std::map<StateId, ActionId> choices;

  friend bool operator==(const PolicyMap&, const PolicyMap&) = default;
  /// Lexicographic over (state, action) pairs in state-index order.
  friend auto operator<=>(const PolicyMap& lhs, const PolicyMap& rhs) { return lhs.choices <=> rhs.choices; }
};

/// "{A:a1, B:a1}"
std::string describe(const Environment& env, const PolicyMap& policy);

}  // namespace morl
