#include "morl/distributional.hpp"

#include <limits>
#include <sstream>

#include "morl/error.hpp"

namespace morl {

std::string_view to_string(Criterion c) { return c == Criterion::ESR ? "ESR" : "SER"; }

Criterion criterion_from_string(std::string_view name) {
  if (name == "ESR" || name == "esr") return Criterion::ESR;
  if (name == "SER" || name == "ser") return Criterion::SER;
  fail(ErrorCode::InvalidArgument, "unknown criterion \"" + std::string(name) + "\" (expected ESR or SER)");
}

void ReturnDistribution::observe(const RewardVector& r) {
  if (r.size() != n_objectives_) {
    fail(ErrorCode::InvalidArgument, "observed return has " + std::to_string(r.size()) + " entries, expected " +
                                         std::to_string(n_objectives_));
  }
  if (!r.is_finite()) fail(ErrorCode::InvalidArgument, "observed return is not finite");
  ++counts_[r];
  ++total_;
}

double ReturnDistribution::probability(const RewardVector& r) const {
  if (total_ == 0) return 0.0;
  auto it = counts_.find(r);
  return it == counts_.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(total_);
}

RewardVector ReturnDistribution::mean() const {
  RewardVector m = RewardVector::zeros(n_objectives_);
  if (total_ == 0) return m;
  for (const auto& [atom, count] : counts_) m.add_scaled(atom, static_cast<double>(count));
  for (std::size_t o = 0; o < n_objectives_; ++o) m[o] /= static_cast<double>(total_);
  return m;
}

double estimate_utility(const ReturnDistribution& dist, const UtilitySpec& spec, Criterion criterion) {
  if (dist.empty()) fail(ErrorCode::InvalidArgument, "utility estimate of an empty distribution");
  if (!spec.is_scalarisation()) {
    fail(ErrorCode::InvalidArgument, "utility estimate needs a scalarisation, not an ordering operator");
  }
  if (criterion == Criterion::SER) return scalarise(spec, dist.mean());
  // Count-weighted sum with a single division, so atoms of equal utility
  // give that utility exactly.
  double sum = 0.0;
  for (const auto& [atom, count] : dist.counts()) sum += static_cast<double>(count) * scalarise(spec, atom);
  return sum / static_cast<double>(dist.total());
}

std::size_t greedy_action(std::span<const ReturnDistribution> dists, const UtilitySpec& spec, Criterion criterion,
                          TieBreak tie, double tol, Rng& rng) {
  if (dists.empty()) fail(ErrorCode::InvalidArgument, "greedy action over no actions");
  std::vector<double> utilities;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < dists.size(); ++a) {
    if (dists[a].empty()) fail(ErrorCode::InvalidArgument, "action " + std::to_string(a) + " was never observed");
    utilities.push_back(estimate_utility(dists[a], spec, criterion));
    best = std::max(best, utilities.back());
  }
  std::vector<std::size_t> candidates;
  for (std::size_t a = 0; a < utilities.size(); ++a) {
    if (best - utilities[a] <= tol) candidates.push_back(a);
  }
  return break_tie(candidates, tie, rng);
}

BanditRun run_bandit(const Environment& env, const BanditConfig& config) {
  config.utility.validate(env.n_objectives());
  if (!config.utility.is_scalarisation()) {
    fail(ErrorCode::InvalidArgument, "bandit learner needs a scalarisation utility");
  }
  const auto start = env.start_distribution();
  if (start.size() != 1) fail(ErrorCode::InvalidArgument, "bandit learner needs a single start state");
  const StateId s = start.front().second;
  if (env.is_terminal(s)) fail(ErrorCode::InvalidArgument, "bandit start state is terminal");
  const std::size_t n_actions = env.action_count(s);
  for (ActionId a = 0; a < n_actions; ++a) {
    for (const auto& o : env.outcome_support(s, a)) {
      if (!env.is_terminal(o.next_state)) {
        fail(ErrorCode::InvalidArgument, "bandit learner needs every action of the start state to terminate");
      }
    }
  }
  if (config.warmup < n_actions) {
    fail(ErrorCode::InvalidArgument, "warmup must be at least the number of actions (" +
                                         std::to_string(n_actions) + ")");
  }

  BanditRun run;
  run.distributions.assign(n_actions, ReturnDistribution(env.n_objectives()));
  Rng rng(config.seed);

  std::ostringstream csv;
  csv << "pull,action";
  for (std::size_t o = 0; o < env.n_objectives(); ++o) csv << ",r" << (o + 1);
  for (ActionId a = 0; a < n_actions; ++a) csv << ",esr_" << env.action_name(s, a) << ",ser_" << env.action_name(s, a);
  csv << '\n';

  for (std::size_t pull = 0; pull < config.pulls; ++pull) {
    ActionId a = 0;
    if (pull < config.warmup) {
      rng.uniform();  // keeps the stream aligned with greedy pulls
      a = pull % n_actions;
    } else {
      a = greedy_action(run.distributions, config.utility, config.criterion, config.tie_break, config.tol, rng);
      if (config.tie_break != TieBreak::Random) rng.uniform();
    }
    const StepOutcome out = env.sample_step(s, a, rng);
    run.distributions[a].observe(out.reward);

    csv << (pull + 1) << ',' << env.action_name(s, a);
    for (double r : out.reward) csv << ',' << format_double(r);
    for (const auto& d : run.distributions) {
      if (d.empty()) {
        csv << ",,";
      } else {
        csv << ',' << format_double(estimate_utility(d, config.utility, Criterion::ESR)) << ','
            << format_double(estimate_utility(d, config.utility, Criterion::SER));
      }
    }
    csv << '\n';
  }

  bool all_observed = true;
  for (const auto& d : run.distributions) all_observed = all_observed && !d.empty();
  if (all_observed) {
    Rng tie_rng(config.seed ^ 0x9E3779B97F4A7C15ull);
    run.final_greedy =
        greedy_action(run.distributions, config.utility, config.criterion, config.tie_break, config.tol, tie_rng);
  }
  run.trace_csv = csv.str();
  return run;
}

}  // namespace morl
