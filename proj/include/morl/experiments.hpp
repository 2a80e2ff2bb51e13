#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "morl/agent.hpp"
#include "morl/momdp.hpp"
#include "morl/policy.hpp"
#include "morl/utility.hpp"

namespace morl {

/// Hyperparameter sweep over (alpha, epsilon0) for each tie-break strategy.
struct SweepConfig {
  std::string env = "fig1-deterministic";
  std::vector<double> alphas = default_alphas();
  std::vector<double> epsilons = default_epsilons();
  std::size_t trials_per_cell = 100;
  std::size_t episodes_per_trial = 500;
  double lambda = 0.95;
  double gamma = 1.0;
  RewardVector q_init{12.0, 0.0, 0.0};
  UtilitySpec utility = UtilitySpec::paper_nonlinear();
  std::vector<TieBreak> strategies{TieBreak::Random, TieBreak::LowIndex, TieBreak::HighIndex};
  TraceMode trace_mode = TraceMode::Literal;
  std::uint64_t base_seed = 20240101;
  double tol = kDefaultTieTolerance;

  /// 0.1, 0.2, ..., 1.0
  static std::vector<double> default_alphas();
  /// 0.1, 0.2, ..., 0.5
  static std::vector<double> default_epsilons();

  void validate() const;
  AgentConfig agent_config(double alpha, double epsilon0, TieBreak strategy) const;
};

/// Seed for trial `trial` of cell `cell_index`; identical across strategies.
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t cell_index, std::size_t trials_per_cell,
                         std::size_t trial);

/// Seed of the stream used to break random ties when extracting the final
/// greedy policy, so classification never perturbs training randomness.
std::uint64_t extraction_seed(std::uint64_t trial_seed);

struct TrialOutcome {
  std::size_t label = 0;
  PolicyMap policy;
  QLambdaAgent agent;
};

/// Trains a fresh agent for config.episodes episodes from `seed` and
/// classifies its final greedy policy against `enumerated`.
TrialOutcome run_trial_detailed(const EnvironmentPtr& env, const AgentConfig& config, std::uint64_t seed,
                                const std::vector<PolicyMap>& enumerated);
std::size_t run_trial(const EnvironmentPtr& env, const AgentConfig& config, std::uint64_t seed);

using PolicyHistogram = std::vector<std::uint64_t>;  // indexed by policy label

struct StrategyGrid {
  TieBreak strategy = TieBreak::Random;
  std::vector<PolicyHistogram> cells;  // alpha-major: cells[ai * |epsilons| + ei]

  friend bool operator==(const StrategyGrid&, const StrategyGrid&) = default;
};

struct SweepResult {
  std::vector<double> alphas;
  std::vector<double> epsilons;
  std::size_t trials_per_cell = 0;
  std::size_t n_policies = 0;
  std::vector<StrategyGrid> grids;  // in SweepConfig::strategies order

  const StrategyGrid& grid(TieBreak strategy) const;
  const PolicyHistogram& cell(TieBreak strategy, std::size_t alpha_index, std::size_t epsilon_index) const;
  /// Total count of `label` across every cell of one strategy.
  std::uint64_t total(TieBreak strategy, std::size_t label) const;

  friend bool operator==(const SweepResult&, const SweepResult&) = default;
};

/// Runs every (strategy, cell, trial). Trials execute on `threads` workers
/// (0 = hardware concurrency); the result does not depend on scheduling.
SweepResult run_sweep(const SweepConfig& config, unsigned threads = 0);

struct DiffMap {
  std::size_t rows = 0;  // alphas
  std::size_t cols = 0;  // epsilons
  std::vector<long long> cells;
  long long total = 0;
};

/// Per cell count_a(label) - count_b(label).
DiffMap diff_map(const StrategyGrid& a, const StrategyGrid& b, std::size_t label, std::size_t rows,
                 std::size_t cols);
DiffMap diff_map(const SweepResult& result, TieBreak a, TieBreak b, std::size_t label);

enum class HeatmapFormat { Csv, Svg };
HeatmapFormat heatmap_format_from_string(std::string_view name);

/// Header "strategy,alpha,epsilon,policy0,...", one row per (strategy, cell).
std::string heatmap_csv(const SweepResult& result);
SweepResult parse_heatmap_csv(std::string_view text);
/// One panel per (strategy, policy label); fill opacity is count / trials.
std::string heatmap_svg(const SweepResult& result);

void emit_heatmap(const SweepResult& result, HeatmapFormat format, const std::filesystem::path& destination);

}  // namespace morl
