// Acceptance runner: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "morl/agent.hpp"
#include "morl/distributional.hpp"
#include "morl/experiments.hpp"
#include "morl/oracle.hpp"
#include "morl/utility.hpp"
#include "scalar_reference.hpp"

using namespace morl;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      if (!ok) detail << "; ";
      detail << what;
      ok = false;
    }
  }
};

int failures = 0;

void criterion(const char* id, const char* title, double budget_s, const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0) {
    std::ostringstream t;
    t << "runtime " << secs << "s exceeds " << budget_s << "s";
    c.expect(secs < budget_s, t.str());
  }
  std::printf("%s %s: %s (%.2fs)%s%s\n", c.ok ? "PASS" : "FAIL", id, title, secs, c.ok ? "" : " -- ",
              c.detail.str().c_str());
  std::fflush(stdout);
  if (!c.ok) ++failures;
}

double uniform_in(Rng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

RewardVector random_vector(Rng& rng, std::size_t n) {
  RewardVector v = RewardVector::zeros(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = uniform_in(rng, -10, 10);
  return v;
}

void linear_properties(Check& c) {
  Rng rng(2718);
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = 1 + rng.uniform_index(4);
    std::vector<double> w(n);
    for (auto& x : w) x = uniform_in(rng, -3, 3);
    const auto spec = UtilitySpec::linear(w);
    const auto v1 = random_vector(rng, n);
    const auto v2 = random_vector(rng, n);
    const double a = uniform_in(rng, -5, 5);
    const double b = uniform_in(rng, -5, 5);
    const double lhs = scalarise(spec, a * v1 + b * v2);
    const double rhs = a * scalarise(spec, v1) + b * scalarise(spec, v2);
    if (std::abs(lhs - rhs) > 1e-9 * std::max(1.0, std::abs(rhs))) {
      c.expect(false, "affine combination case " + std::to_string(k));
      return;
    }

    std::vector<RewardVector> values;
    const std::size_t m = 2 + rng.uniform_index(4);
    for (std::size_t i = 0; i < m; ++i) values.push_back(random_vector(rng, n));
    const double scale = uniform_in(rng, 0.1, 10);
    std::vector<double> scaled_w(w);
    for (auto& x : scaled_w) x *= scale;
    const auto base = greedy_set(values, spec, 1e-9);
    const auto scaled = greedy_set(values, UtilitySpec::linear(scaled_w), 1e-9);
    if (base.front() != scaled.front()) {
      c.expect(false, "argmax invariance case " + std::to_string(k));
      return;
    }
  }
}

void trace_bounds(Check& c) {
  const auto env = Environment::builtin("fig1-deterministic");
  for (auto mode : {TraceMode::Literal, TraceMode::WatkinsReset}) {
    AgentConfig cfg;
    cfg.trace_mode = mode;
    cfg.tie_break = TieBreak::Random;
    QLambdaAgent agent(cfg, env);
    Rng rng(17);
    for (int ep = 0; ep < 300; ++ep) {
      AugmentedState s{env->sample_start(rng), RewardVector::zeros(3)};
      agent.begin_episode();
      auto choice = agent.select_action(s, 0.4, rng);
      while (true) {
        const auto out = env->sample_step(s.state, choice.action, rng);
        AugmentedState next{out.next_state, s.accrued + out.reward};
        std::optional<ActionChoice> nc;
        if (!out.is_terminal) nc = agent.select_action(next, 0.4, rng);
        agent.learn_step(s, choice.action, out.reward, next, out.is_terminal, nc);
        for (const auto& [key, values] : agent.q_table()) {
          for (ActionId a = 0; a < values.size(); ++a) {
            const double e = agent.trace(key, a);
            if (e < 0.0 || e > 1.0) {
              c.expect(false, "trace out of [0, 1]");
              return;
            }
          }
        }
        if (out.is_terminal) break;
        s = next;
        choice = *nc;
      }
    }
  }
}

void scalar_reduction(Check& c) {
  const auto env = Environment::create(parse_momdp(morl::testing::kScalarChain));
  AgentConfig cfg;
  cfg.alpha = 0.3;
  cfg.gamma = 0.9;
  cfg.lambda = 0.8;
  cfg.epsilon0 = 0.3;
  cfg.episodes = 100;
  cfg.q_init = RewardVector{2.0};
  cfg.utility = UtilitySpec::linear({1.0});
  cfg.tie_break = TieBreak::Random;
  QLambdaAgent agent(cfg, env);
  morl::testing::ScalarQLambda reference(*env, cfg.alpha, cfg.gamma, cfg.lambda, 2.0, cfg.tol);
  Rng ra(555);
  Rng rb(555);
  for (std::size_t ep = 0; ep < cfg.episodes; ++ep) {
    const double eps = epsilon_at(cfg, ep);
    agent.run_episode(eps, ra);
    reference.episode(eps, rb);
    if (agent.q_table().size() != reference.table().size()) {
      c.expect(false, "table sizes differ at episode " + std::to_string(ep));
      return;
    }
    auto it = reference.table().begin();
    for (const auto& [key, values] : agent.q_table()) {
      bool same = key.state == it->first.first && key.accrued[0] == it->first.second;
      for (ActionId a = 0; same && a < values.size(); ++a) same = values[a][0] == it->second[a];
      if (!same) {
        c.expect(false, "q-values differ at episode " + std::to_string(ep));
        return;
      }
      ++it;
    }
  }
  c.expect(ra.uniform() == rb.uniform(), "random streams diverged");
}

}  // namespace

int main() {
  const auto u = UtilitySpec::paper_nonlinear();

  criterion("1", "policy table on fig1-deterministic", 1.0, [&](Check& c) {
    const auto env = Environment::builtin("fig1-deterministic");
    const auto policies = enumerate_policies(*env);
    c.expect(policies.size() == 4, "expected 4 policies, got " + std::to_string(policies.size()));
    const RewardVector returns[] = {{7, -1, -5}, {7, -5, -1}, {8, -3, -3}, {0, -5, -5}};
    const double utilities[] = {9, 9, 7, -25};
    for (std::size_t i = 0; i < policies.size() && i < 4; ++i) {
      const auto eval = evaluate_policy(*env, policies[i], u);
      c.expect(eval.mean_return == returns[i], "policy " + std::to_string(i) + " return " + eval.mean_return.to_string());
      c.expect(eval.utility_ser == utilities[i] && eval.utility_esr == utilities[i],
               "policy " + std::to_string(i) + " utility");
    }
  });

  criterion("2", "bandit ground truth from the oracle", 1.0, [&](Check& c) {
    const auto env = Environment::builtin("fig3-bandit");
    const auto policies = enumerate_policies(*env);
    c.expect(policies.size() == 2, "expected 2 policies");
    if (policies.size() != 2) return;
    const auto a1 = evaluate_policy(*env, policies[0], u);
    const auto a2 = evaluate_policy(*env, policies[1], u);
    c.expect(std::abs(a1.utility_ser - 5) <= 1e-12, "a1 SER " + std::to_string(a1.utility_ser));
    c.expect(std::abs(a1.utility_esr - 9) <= 1e-12, "a1 ESR " + std::to_string(a1.utility_esr));
    c.expect(std::abs(a2.utility_ser - 7) <= 1e-12, "a2 SER " + std::to_string(a2.utility_ser));
    c.expect(std::abs(a2.utility_esr - 7) <= 1e-12, "a2 ESR " + std::to_string(a2.utility_esr));
  });

  criterion("3", "distributional ESR estimator and bandit choice", 5.0, [&](Check& c) {
    ReturnDistribution exact(3);
    exact.observe({7, -1, -5});
    exact.observe({7, -5, -1});
    c.expect(estimate_utility(exact, u, Criterion::ESR) == 9, "two-atom ESR is not 9");

    const auto env = Environment::builtin("fig3-bandit");
    BanditConfig esr;
    esr.pulls = 10000;
    esr.seed = 2024;
    const auto run = run_bandit(*env, esr);
    c.expect(estimate_utility(run.distributions[0], u, Criterion::ESR) == 9, "bandit ESR(a1) is not exactly 9");
    c.expect(run.final_greedy == 0, "ESR greedy action is not a1");
    BanditConfig ser = esr;
    ser.criterion = Criterion::SER;
    c.expect(run_bandit(*env, ser).final_greedy == 1, "SER greedy action is not a2");
  });

  criterion("4", "analytic preference boundary", 1.0, [&](Check& c) {
    const auto [lo, hi] = preference_boundary();
    c.expect(std::abs(lo - (2 - std::sqrt(2.0)) / 4) <= 1e-12, "lower root");
    c.expect(std::abs(hi - (2 + std::sqrt(2.0)) / 4) <= 1e-12, "upper root");
    c.expect(segment_utility(0.5) == 5, "segment_utility(0.5)");
    c.expect(segment_utility(0.0) == 9 && segment_utility(1.0) == 9, "segment endpoints");
  });

  SweepConfig grid;
  std::optional<SweepResult> sweep;
  criterion("5", "interference on the default grid", 120.0, [&](Check& c) {
    sweep = run_sweep(grid, 0);
    const auto& r = *sweep;
    const std::size_t ne = r.epsilons.size();
    const std::size_t total_trials = r.alphas.size() * ne * r.trials_per_cell;
    std::size_t a07 = 0;
    std::size_t a01 = 0;
    std::size_t a10 = 0;
    for (std::size_t i = 0; i < r.alphas.size(); ++i) {
      if (std::abs(r.alphas[i] - 0.7) < 1e-9) a07 = i;
      if (std::abs(r.alphas[i] - 0.1) < 1e-9) a01 = i;
      if (std::abs(r.alphas[i] - 1.0) < 1e-9) a10 = i;
    }

    std::uint64_t best07 = 0;
    for (std::size_t e = 0; e < ne; ++e) best07 = std::max(best07, r.cell(TieBreak::Random, a07, e)[2]);
    std::printf("     a. best random Policy-2 count at alpha 0.7: %llu / %zu\n",
                static_cast<unsigned long long>(best07), r.trials_per_cell);
    c.expect(best07 >= 60, "a: no alpha 0.7 cell reaches 60");

    const auto rnd = r.total(TieBreak::Random, 2);
    const auto low = r.total(TieBreak::LowIndex, 2);
    const auto high = r.total(TieBreak::HighIndex, 2);
    std::printf("     b. Policy-2 totals random %llu, low-index %llu, high-index %llu (of %zu)\n",
                static_cast<unsigned long long>(rnd), static_cast<unsigned long long>(low),
                static_cast<unsigned long long>(high), total_trials);
    c.expect(low + 0.15 * static_cast<double>(total_trials) <= static_cast<double>(rnd),
             "b: low-index not 15% below random");
    c.expect(high < rnd, "b: high-index not below random");

    std::uint64_t p3 = 0;
    for (const auto& g : r.grids) {
      for (const auto& h : g.cells) p3 += h[3];
    }
    const std::size_t all = total_trials * r.grids.size();
    std::printf("     c. Policy-3 count %llu of %zu trials\n", static_cast<unsigned long long>(p3), all);
    c.expect(static_cast<double>(p3) < 0.01 * static_cast<double>(all), "c: Policy 3 too frequent");

    for (std::size_t e = 0; e < ne; ++e) {
      const auto mid = r.cell(TieBreak::Random, a07, e)[2];
      const auto lo = r.cell(TieBreak::Random, a01, e)[2];
      const auto hi = r.cell(TieBreak::Random, a10, e)[2];
      std::printf("     d. epsilon %.1f: alpha 0.1 -> %llu, 0.7 -> %llu, 1.0 -> %llu\n", r.epsilons[e],
                  static_cast<unsigned long long>(lo), static_cast<unsigned long long>(mid),
                  static_cast<unsigned long long>(hi));
      c.expect(mid > lo && mid > hi, "d: not peaked at alpha 0.7 for epsilon index " + std::to_string(e));
    }
  });

  criterion("6a", "linear utility affine and argmax invariance, 1000 cases", 0, linear_properties);

  criterion("6b", "segment identity on 1001 points", 0, [&](Check& c) {
    for (int i = 0; i <= 1000; ++i) {
      const double x = i / 1000.0;
      const double lhs = scalarise(u, {7, -5 + 4 * x, -1 - 4 * x});
      if (std::abs(lhs - (16 * x * x - 16 * x + 9)) > 1e-9) {
        c.expect(false, "x = " + std::to_string(x));
        return;
      }
    }
  });

  criterion("6c", "deterministic SER equals ESR", 0, [&](Check& c) {
    const auto env = Environment::builtin("fig1-deterministic");
    for (const auto& spec : {u, UtilitySpec::linear({1, 2, 3}), UtilitySpec::chebyshev({1, 1, 1}, {8, 0, 0})}) {
      for (const auto& policy : enumerate_policies(*env)) {
        const auto eval = evaluate_policy(*env, policy, spec);
        c.expect(eval.utility_ser == eval.utility_esr, describe(*env, policy));
      }
    }
  });

  criterion("6d", "oracle ESR against 1e6 simulated episodes", 0, [&](Check& c) {
    const auto env = Environment::builtin("fig3-bandit");
    constexpr int kEpisodes = 1000000;
    for (const auto& policy : enumerate_policies(*env)) {
      const auto eval = evaluate_policy(*env, policy, u);
      double var = 0;
      for (const auto& row : eval.outcome_table) {
        const double d = scalarise(u, row.total_return) - eval.utility_esr;
        var += row.probability * d * d;
      }
      Rng rng(8080);
      double sum = 0;
      for (int ep = 0; ep < kEpisodes; ++ep) {
        StateId s = env->sample_start(rng);
        RewardVector acc = RewardVector::zeros(env->n_objectives());
        while (!env->is_terminal(s)) {
          const auto out = env->sample_step(s, policy.choices.at(s), rng);
          acc += out.reward;
          s = out.next_state;
        }
        sum += scalarise(u, acc);
      }
      const double sigma = std::sqrt(var / kEpisodes);
      c.expect(std::abs(sum / kEpisodes - eval.utility_esr) <= 3 * sigma + 1e-9, describe(*env, policy));
    }
  });

  criterion("6e", "eligibility traces stay within [0, 1]", 0, trace_bounds);

  criterion("6f", "histogram conservation and byte-identical repeat sweep", 0, [&](Check& c) {
    if (!sweep) {
      c.expect(false, "default sweep unavailable");
      return;
    }
    for (const auto& g : sweep->grids) {
      for (const auto& h : g.cells) {
        c.expect(std::accumulate(h.begin(), h.end(), std::uint64_t{0}) == sweep->trials_per_cell,
                 "cell total differs from trials per cell");
      }
    }
    const auto repeat = run_sweep(grid, 3);
    c.expect(heatmap_csv(repeat) == heatmap_csv(*sweep), "repeat sweep csv differs");
  });

  criterion("6g", "one-objective agent matches scalar Q(lambda) over 100 episodes", 0, scalar_reduction);

  std::printf("%s: %d failing criteria\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
