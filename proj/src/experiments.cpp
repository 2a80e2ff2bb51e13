#include "morl/experiments.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "morl/error.hpp"
#include "morl/oracle.hpp"

namespace morl {

namespace {

constexpr std::uint64_t kSeedStride = 1'000'003;
constexpr std::uint64_t kExtractionSeedMask = 0xA5A5'5A5A'C3C3'3C3Cull;

}  // namespace

std::vector<double> SweepConfig::default_alphas() {
  std::vector<double> out;
  for (int i = 1; i <= 10; ++i) out.push_back(i / 10.0);
  return out;
}

std::vector<double> SweepConfig::default_epsilons() {
  std::vector<double> out;
  for (int i = 1; i <= 5; ++i) out.push_back(i / 10.0);
  return out;
}

void SweepConfig::validate() const {
  auto bad = [](const std::string& what) { fail(ErrorCode::InvalidArgument, "sweep config: " + what); };
  if (alphas.empty()) bad("alphas must be non-empty");
  if (epsilons.empty()) bad("epsilons must be non-empty");
  if (strategies.empty()) bad("strategies must be non-empty");
  if (trials_per_cell == 0) bad("trials_per_cell must be positive");
  if (episodes_per_trial == 0) bad("episodes_per_trial must be positive");
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (strategies[i] == strategies[j]) bad("strategy \"" + std::string(to_string(strategies[i])) + "\" repeated");
    }
  }
}

AgentConfig SweepConfig::agent_config(double alpha, double epsilon0, TieBreak strategy) const {
  AgentConfig c;
  c.alpha = alpha;
  c.gamma = gamma;
  c.lambda = lambda;
  c.epsilon0 = epsilon0;
  c.episodes = episodes_per_trial;
  c.q_init = q_init;
  c.utility = utility;
  c.tie_break = strategy;
  c.trace_mode = trace_mode;
  c.tol = tol;
  return c;
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t cell_index, std::size_t trials_per_cell,
                         std::size_t trial) {
  // Unsigned wrap-around is intended for very large base seeds.
  return base_seed + kSeedStride * (static_cast<std::uint64_t>(cell_index) * trials_per_cell + trial);
}

std::uint64_t extraction_seed(std::uint64_t seed) { return seed ^ kExtractionSeedMask; }

TrialOutcome run_trial_detailed(const EnvironmentPtr& env, const AgentConfig& config, std::uint64_t seed,
                                const std::vector<PolicyMap>& enumerated) {
  QLambdaAgent agent(config, env);
  Rng rng(seed);
  for (std::size_t episode = 0; episode < config.episodes; ++episode) {
    agent.run_episode(epsilon_at(config, episode), rng);
  }
  Rng tie_rng(extraction_seed(seed));
  PolicyMap policy = agent.extract_greedy_policy(tie_rng);
  const std::size_t label = classify_policy(enumerated, policy);
  return TrialOutcome{label, std::move(policy), std::move(agent)};
}

std::size_t run_trial(const EnvironmentPtr& env, const AgentConfig& config, std::uint64_t seed) {
  return run_trial_detailed(env, config, seed, enumerate_policies(*env)).label;
}

const StrategyGrid& SweepResult::grid(TieBreak strategy) const {
  for (const auto& g : grids) {
    if (g.strategy == strategy) return g;
  }
  fail(ErrorCode::InvalidArgument, "sweep result has no \"" + std::string(to_string(strategy)) + "\" grid");
}

const PolicyHistogram& SweepResult::cell(TieBreak strategy, std::size_t alpha_index, std::size_t epsilon_index) const {
  if (alpha_index >= alphas.size() || epsilon_index >= epsilons.size()) {
    fail(ErrorCode::InvalidArgument, "cell index out of range");
  }
  return grid(strategy).cells[alpha_index * epsilons.size() + epsilon_index];
}

std::uint64_t SweepResult::total(TieBreak strategy, std::size_t label) const {
  std::uint64_t sum = 0;
  for (const auto& h : grid(strategy).cells) sum += label < h.size() ? h[label] : 0;
  return sum;
}

SweepResult run_sweep(const SweepConfig& config, unsigned threads) {
  config.validate();
  const EnvironmentPtr env = Environment::resolve(config.env);
  for (TieBreak s : config.strategies) {
    for (double a : config.alphas) {
      for (double e : config.epsilons) config.agent_config(a, e, s).validate(env->n_objectives());
    }
  }
  const auto enumerated = enumerate_policies(*env);

  const std::size_t n_cells = config.alphas.size() * config.epsilons.size();
  const std::size_t per_strategy = n_cells * config.trials_per_cell;
  const std::size_t n_jobs = per_strategy * config.strategies.size();
  std::vector<std::size_t> labels(n_jobs);

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t job = next++; job < n_jobs; job = next++) {
      const std::size_t strategy_index = job / per_strategy;
      const std::size_t within = job % per_strategy;
      const std::size_t cell = within / config.trials_per_cell;
      const std::size_t trial = within % config.trials_per_cell;
      const double alpha = config.alphas[cell / config.epsilons.size()];
      const double epsilon0 = config.epsilons[cell % config.epsilons.size()];
      try {
        const auto agent_config = config.agent_config(alpha, epsilon0, config.strategies[strategy_index]);
        const auto seed = trial_seed(config.base_seed, cell, config.trials_per_cell, trial);
        labels[job] = run_trial_detailed(env, agent_config, seed, enumerated).label;
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n_jobs;
      }
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_jobs));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  SweepResult result;
  result.alphas = config.alphas;
  result.epsilons = config.epsilons;
  result.trials_per_cell = config.trials_per_cell;
  result.n_policies = enumerated.size();
  for (std::size_t si = 0; si < config.strategies.size(); ++si) {
    StrategyGrid grid{config.strategies[si], std::vector<PolicyHistogram>(n_cells, PolicyHistogram(enumerated.size()))};
    for (std::size_t within = 0; within < per_strategy; ++within) {
      ++grid.cells[within / config.trials_per_cell][labels[si * per_strategy + within]];
    }
    result.grids.push_back(std::move(grid));
  }
  return result;
}

DiffMap diff_map(const StrategyGrid& a, const StrategyGrid& b, std::size_t label, std::size_t rows,
                 std::size_t cols) {
  if (a.cells.size() != rows * cols || b.cells.size() != rows * cols) {
    fail(ErrorCode::InvalidArgument, "diff_map: grid shape mismatch");
  }
  DiffMap out{rows, cols, {}, 0};
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    if (label >= a.cells[i].size() || label >= b.cells[i].size()) {
      fail(ErrorCode::InvalidArgument, "diff_map: policy label out of range");
    }
    const long long d = static_cast<long long>(a.cells[i][label]) - static_cast<long long>(b.cells[i][label]);
    out.cells.push_back(d);
    out.total += d;
  }
  return out;
}

DiffMap diff_map(const SweepResult& result, TieBreak a, TieBreak b, std::size_t label) {
  return diff_map(result.grid(a), result.grid(b), label, result.alphas.size(), result.epsilons.size());
}

}  // namespace morl
