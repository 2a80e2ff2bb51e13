#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "morl/reward_vector.hpp"
#include "morl/rng.hpp"

namespace morl {

enum class UtilityKind { Linear, PaperNonlinear, Chebyshev, LexThreshold };

/// Scalarisation or ordering operator over reward vectors.
///
/// - Linear:          w . v
/// - PaperNonlinear:  2 v1 - v2 v3 (three objectives)
/// - Chebyshev:       -max_o w_o |v_o - z_o|  (negated so larger is better)
/// - LexThreshold:    ordering only; objectives compared in `objective_order`,
///                    each clamped to min(v_o, threshold_o).
struct UtilitySpec {
  UtilityKind kind = UtilityKind::PaperNonlinear;
  std::vector<double> weights;
  std::vector<double> reference_point;
  std::vector<double> thresholds;
  std::vector<std::size_t> objective_order;

  static UtilitySpec linear(std::vector<double> weights);
  static UtilitySpec paper_nonlinear();
  static UtilitySpec chebyshev(std::vector<double> weights, std::vector<double> reference_point);
  static UtilitySpec lex_threshold(std::vector<double> thresholds, std::vector<std::size_t> objective_order);

  bool is_scalarisation() const noexcept { return kind != UtilityKind::LexThreshold; }

  /// Throws Error(InvalidArgument) when parameters do not fit `n_objectives`.
  void validate(std::size_t n_objectives) const;
};

std::string_view to_string(UtilityKind kind);
UtilityKind utility_kind_from_string(std::string_view name);

enum class TieBreak { Random, LowIndex, HighIndex };

std::string_view to_string(TieBreak strategy);
TieBreak tie_break_from_string(std::string_view name);

constexpr double kDefaultTieTolerance = 1e-9;

/// Scalar utility of `v`. Throws for ordering operators.
double scalarise(const UtilitySpec& spec, const RewardVector& v);

std::weak_ordering compare(const UtilitySpec& spec, const RewardVector& lhs, const RewardVector& rhs);

/// Indices (ascending) of the actions whose utility is maximal: within `tol`
/// of the best scalarised value, or compare-equal to the maximum for
/// ordering operators.
std::vector<std::size_t> greedy_set(std::span<const RewardVector> values, const UtilitySpec& spec,
                                    double tol = kDefaultTieTolerance);

/// Picks one candidate using a pre-drawn variate `u` in [0, 1). Deterministic
/// strategies ignore `u`.
std::size_t break_tie_with(std::span<const std::size_t> candidates, TieBreak strategy, double u);

/// Random consumes exactly one variate, even for a single candidate;
/// deterministic strategies consume none.
std::size_t break_tie(std::span<const std::size_t> candidates, TieBreak strategy, Rng& rng);

}  // namespace morl
