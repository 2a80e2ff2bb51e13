#include "morl/utility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "morl/error.hpp"

namespace morl {

UtilitySpec UtilitySpec::linear(std::vector<double> weights) {
  UtilitySpec spec;
  spec.kind = UtilityKind::Linear;
  spec.weights = std::move(weights);
  return spec;
}

UtilitySpec UtilitySpec::paper_nonlinear() { return UtilitySpec{}; }

UtilitySpec UtilitySpec::chebyshev(std::vector<double> weights, std::vector<double> reference_point) {
  UtilitySpec spec;
  spec.kind = UtilityKind::Chebyshev;
  spec.weights = std::move(weights);
  spec.reference_point = std::move(reference_point);
  return spec;
}

UtilitySpec UtilitySpec::lex_threshold(std::vector<double> thresholds, std::vector<std::size_t> objective_order) {
  UtilitySpec spec;
  spec.kind = UtilityKind::LexThreshold;
  spec.thresholds = std::move(thresholds);
  spec.objective_order = std::move(objective_order);
  return spec;
}

void UtilitySpec::validate(std::size_t n_objectives) const {
  auto bad = [](const std::string& what) { fail(ErrorCode::InvalidArgument, "utility: " + what); };
  auto check_length = [&](const std::vector<double>& v, const char* field) {
    if (v.size() != n_objectives) {
      bad(std::string(field) + " has " + std::to_string(v.size()) + " entries, expected " +
          std::to_string(n_objectives));
    }
  };
  switch (kind) {
    case UtilityKind::Linear:
      check_length(weights, "weights");
      for (double w : weights) {
        if (!std::isfinite(w)) bad("linear weights must be finite");
      }
      break;
    case UtilityKind::PaperNonlinear:
      if (n_objectives != 3) bad("paper-nonlinear needs exactly 3 objectives");
      break;
    case UtilityKind::Chebyshev:
      check_length(weights, "weights");
      check_length(reference_point, "reference_point");
      for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) bad("chebyshev weights must be finite and non-negative");
      }
      for (double z : reference_point) {
        if (!std::isfinite(z)) bad("chebyshev reference_point must be finite");
      }
      break;
    case UtilityKind::LexThreshold: {
      check_length(thresholds, "thresholds");
      for (double t : thresholds) {
        if (std::isnan(t)) bad("thresholds must not be NaN");
      }
      if (objective_order.size() != n_objectives) bad("objective_order must be a permutation of all objectives");
      std::vector<std::size_t> sorted = objective_order;
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i] != i) bad("objective_order must be a permutation of 0..n-1");
      }
      break;
    }
  }
}

std::string_view to_string(UtilityKind kind) {
  switch (kind) {
    case UtilityKind::Linear: return "linear";
    case UtilityKind::PaperNonlinear: return "paper-nonlinear";
    case UtilityKind::Chebyshev: return "chebyshev";
    case UtilityKind::LexThreshold: return "lex-threshold";
  }
  return "unknown";
}

UtilityKind utility_kind_from_string(std::string_view name) {
  if (name == "linear") return UtilityKind::Linear;
  if (name == "paper-nonlinear") return UtilityKind::PaperNonlinear;
  if (name == "chebyshev") return UtilityKind::Chebyshev;
  if (name == "lex-threshold") return UtilityKind::LexThreshold;
  fail(ErrorCode::InvalidArgument, "unknown utility kind \"" + std::string(name) + "\"");
}

std::string_view to_string(TieBreak strategy) {
  switch (strategy) {
    case TieBreak::Random: return "random";
    case TieBreak::LowIndex: return "low-index";
    case TieBreak::HighIndex: return "high-index";
  }
  return "unknown";
}

TieBreak tie_break_from_string(std::string_view name) {
  if (name == "random") return TieBreak::Random;
  if (name == "low-index") return TieBreak::LowIndex;
  if (name == "high-index") return TieBreak::HighIndex;
  fail(ErrorCode::InvalidArgument, "unknown tie-break strategy \"" + std::string(name) + "\"");
}

double scalarise(const UtilitySpec& spec, const RewardVector& v) {
  switch (spec.kind) {
    case UtilityKind::Linear: {
      double sum = 0.0;
      for (std::size_t o = 0; o < v.size(); ++o) sum += spec.weights[o] * v[o];
      return sum;
    }
    case UtilityKind::PaperNonlinear:
      return 2.0 * v[0] - v[1] * v[2];
    case UtilityKind::Chebyshev: {
      double worst = 0.0;
      for (std::size_t o = 0; o < v.size(); ++o) {
        worst = std::max(worst, spec.weights[o] * std::abs(v[o] - spec.reference_point[o]));
      }
      return -worst;
    }
    case UtilityKind::LexThreshold:
      break;
  }
  fail(ErrorCode::InvalidArgument, "lex-threshold is an ordering operator and has no scalar utility");
}

std::weak_ordering compare(const UtilitySpec& spec, const RewardVector& lhs, const RewardVector& rhs) {
  if (spec.is_scalarisation()) {
    const double a = scalarise(spec, lhs);
    const double b = scalarise(spec, rhs);
    if (a < b) return std::weak_ordering::less;
    if (a > b) return std::weak_ordering::greater;
    return std::weak_ordering::equivalent;
  }
  for (std::size_t o : spec.objective_order) {
    const double a = std::min(lhs[o], spec.thresholds[o]);
    const double b = std::min(rhs[o], spec.thresholds[o]);
    if (a < b) return std::weak_ordering::less;
    if (a > b) return std::weak_ordering::greater;
  }
  return std::weak_ordering::equivalent;
}

std::vector<std::size_t> greedy_set(std::span<const RewardVector> values, const UtilitySpec& spec, double tol) {
  if (values.empty()) fail(ErrorCode::InvalidArgument, "greedy_set over an empty value list");
  if (!(tol >= 0.0)) fail(ErrorCode::InvalidArgument, "tie tolerance must be non-negative");
  std::vector<std::size_t> out;
  if (spec.is_scalarisation()) {
    std::vector<double> utilities(values.size());
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < values.size(); ++i) {
      utilities[i] = scalarise(spec, values[i]);
      best = std::max(best, utilities[i]);
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (best - utilities[i] <= tol) out.push_back(i);
    }
    return out;
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (compare(spec, values[i], values[best]) == std::weak_ordering::greater) best = i;
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (compare(spec, values[i], values[best]) == std::weak_ordering::equivalent) out.push_back(i);
  }
  return out;
}

std::size_t break_tie_with(std::span<const std::size_t> candidates, TieBreak strategy, double u) {
  if (candidates.empty()) fail(ErrorCode::InvalidArgument, "break_tie over an empty candidate set");
  switch (strategy) {
    case TieBreak::Random:
      return candidates[Rng::index_from(u, candidates.size())];
    case TieBreak::LowIndex:
      return *std::min_element(candidates.begin(), candidates.end());
    case TieBreak::HighIndex:
      return *std::max_element(candidates.begin(), candidates.end());
  }
  return candidates.front();
}

std::size_t break_tie(std::span<const std::size_t> candidates, TieBreak strategy, Rng& rng) {
  if (candidates.empty()) fail(ErrorCode::InvalidArgument, "break_tie over an empty candidate set");
  const double u = strategy == TieBreak::Random ? rng.uniform() : 0.0;
  return break_tie_with(candidates, strategy, u);
}

}  // namespace morl
