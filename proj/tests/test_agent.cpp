#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <doctest.h>

#include "morl/agent.hpp"
#include "morl/error.hpp"
#include "morl/oracle.hpp"
#include "scalar_reference.hpp"
#include "support.hpp"

using namespace morl;
using morl::testing::fig1;
using morl::testing::fig3;
using morl::testing::near;
using morl::testing::kScalarChain;
using morl::testing::ScalarQLambda;

namespace {

AugmentedState at(const Environment& env, const char* name) {
  return {env.state_id(name), RewardVector::zeros(env.n_objectives())};
}

AgentConfig greedy_config(double alpha, TieBreak tie = TieBreak::LowIndex) {
  AgentConfig c;
  c.alpha = alpha;
  c.epsilon0 = 0.0;
  c.tie_break = tie;
  return c;
}

}  // namespace

TEST_SUITE("agent") {

TEST_CASE("initial values") {
  const auto env = fig1();
  QLambdaAgent agent(AgentConfig{}, env);
  CHECK(agent.q_value(at(*env, "A"), 0) == RewardVector{12, 0, 0});
  CHECK(agent.q_value(at(*env, "T1"), 0) == RewardVector{0, 0, 0});
  CHECK(agent.q_table().empty());
  CHECK(agent.episodes_completed() == 0);

  AgentConfig bad;
  bad.q_init = RewardVector{12, 0};
  CHECK_THROWS_AS(QLambdaAgent(bad, env), Error);
  bad = AgentConfig{};
  bad.alpha = 0.0;
  CHECK_THROWS_AS(QLambdaAgent(bad, env), Error);
}

TEST_CASE("epsilon schedule") {
  AgentConfig c;
  c.epsilon0 = 0.2;
  c.episodes = 500;
  CHECK(epsilon_at(c, 0) == 0.2);
  CHECK(epsilon_at(c, 500) == 0.0);
  c.epsilon0 = 0.4;
  CHECK(epsilon_at(c, 250) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK_THROWS_AS(epsilon_at(c, 501), Error);
}

TEST_CASE("single update with alpha 0.5") {
  const auto env = fig1();
  QLambdaAgent agent(greedy_config(0.5), env);
  const auto B = at(*env, "B");
  const auto T1 = AugmentedState{env->state_id("T1"), RewardVector{7, -1, -5}};
  agent.begin_episode();
  const auto delta = agent.learn_step(B, 0, {7, -1, -5}, T1, true, std::nullopt);
  CHECK(delta == RewardVector{-5, -1, -5});
  CHECK(agent.q_value(B, 0) == RewardVector{9.5, -0.5, -2.5});
}

TEST_CASE("alpha 1 overwrites and terminal delta is r - Q") {
  const auto env = fig1();
  QLambdaAgent agent(greedy_config(1.0), env);
  const auto B = at(*env, "B");
  const auto T1 = AugmentedState{env->state_id("T1"), RewardVector{7, -1, -5}};
  agent.begin_episode();
  agent.set_q_value(B, 0, {3.25, 1, -2});
  const auto delta = agent.learn_step(B, 0, {7, -1, -5}, T1, true, std::nullopt);
  CHECK(delta == RewardVector{7, -1, -5} - RewardVector{3.25, 1, -2});
  CHECK(agent.q_value(B, 0) == RewardVector{7, -1, -5});
}

TEST_CASE("two-step hand trace with lambda 0.95") {
  const auto env = fig1();
  QLambdaAgent agent(greedy_config(1.0), env);
  Rng rng(1);
  const auto ret = agent.run_episode(0.0, rng);
  // Low-index ties: A -> a1 -> B -> a1 -> T1.
  CHECK(ret == RewardVector{7, -1, -5});
  const auto A = at(*env, "A");
  const auto B = at(*env, "B");
  CHECK(agent.trace(A, 0) == doctest::Approx(0.95 * 0.95));
  CHECK(near(agent.q_value(A, 0), RewardVector{7.25, -0.95, -4.75}, 1e-12));
  CHECK(agent.q_value(B, 0) == RewardVector{7, -1, -5});
}

TEST_CASE("greedy selection at converged values") {
  const auto env = fig1();
  const auto B = at(*env, "B");
  const auto C = at(*env, "C");
  for (auto tie : {TieBreak::Random, TieBreak::LowIndex, TieBreak::HighIndex}) {
    QLambdaAgent agent(greedy_config(0.1, tie), env);
    agent.set_q_value(B, 0, {7, -1, -5});
    agent.set_q_value(B, 1, {7, -5, -1});
    agent.set_q_value(C, 0, {8, -3, -3});
    agent.set_q_value(C, 1, {0, -5, -5});
    for (double u : {0.0, 0.3, 0.7, 0.999}) CHECK(agent.greedy_action(C, u) == 0);
    if (tie == TieBreak::LowIndex) CHECK(agent.greedy_action(B, 0.9) == 0);
    if (tie == TieBreak::HighIndex) CHECK(agent.greedy_action(B, 0.1) == 1);
    if (tie == TieBreak::Random) {
      CHECK(agent.greedy_action(B, 0.1) == 0);
      CHECK(agent.greedy_action(B, 0.9) == 1);
    }
  }
}

TEST_CASE("select_action consumes three variates and explores uniformly at epsilon 1") {
  const auto env = fig1();
  QLambdaAgent agent(greedy_config(0.1), env);
  const auto A = at(*env, "A");
  Rng a(8);
  Rng b(8);
  agent.select_action(A, 0.0, a);
  b.uniform();
  b.uniform();
  b.uniform();
  CHECK(a.uniform() == b.uniform());

  Rng rng(99);
  int picks[2] = {};
  for (int i = 0; i < 20000; ++i) ++picks[agent.select_action(A, 1.0, rng).action];
  CHECK(picks[0] > 9700);
  CHECK(picks[1] > 9700);
}

TEST_CASE("forced episodes return the table returns") {
  const auto env = fig1();
  QLambdaAgent agent(AgentConfig{}, env);
  Rng rng(4);
  auto forced = [](ActionId first, ActionId second) {
    return [=](const AugmentedState&, std::size_t step) -> std::optional<ActionId> {
      return step == 0 ? first : second;
    };
  };
  CHECK(agent.run_episode(0.5, rng, forced(0, 0)) == RewardVector{7, -1, -5});
  CHECK(agent.run_episode(0.5, rng, forced(1, 1)) == RewardVector{0, -5, -5});
  CHECK(agent.run_episode(0.5, rng, forced(1, 0)) == RewardVector{8, -3, -3});

  const auto bandit = fig3();
  QLambdaAgent b(AgentConfig{}, bandit);
  for (int i = 0; i < 20; ++i) {
    const auto r = b.run_episode(1.0, rng);
    bool matches = false;
    for (ActionId a = 0; a < 2; ++a) {
      for (const auto& o : bandit->outcome_support(0, a)) matches = matches || o.reward == r;
    }
    CHECK(matches);
  }
}

TEST_CASE("convergence with low-index ties and no exploration") {
  const auto env = fig1();
  QLambdaAgent agent(greedy_config(0.5), env);
  Rng rng(123);
  for (int ep = 0; ep < 200; ++ep) agent.run_episode(0.0, rng);
  Rng tie(0);
  const auto policy = agent.extract_greedy_policy(tie);
  CHECK(classify_policy(*env, policy) == 0);
  CHECK(near(agent.q_value(at(*env, "B"), 0), RewardVector{7, -1, -5}, 1e-6));
}

TEST_CASE("greedy policy extraction") {
  const auto env = fig1();
  const auto A = at(*env, "A");
  const auto B = at(*env, "B");
  const auto C = at(*env, "C");
  auto converged = [&](TieBreak tie) {
    QLambdaAgent agent(greedy_config(0.1, tie), env);
    agent.set_q_value(A, 0, {7, -1, -5});
    agent.set_q_value(A, 1, {8, -3, -3});
    agent.set_q_value(B, 0, {7, -1, -5});
    agent.set_q_value(B, 1, {7, -5, -1});
    agent.set_q_value(C, 0, {8, -3, -3});
    agent.set_q_value(C, 1, {0, -5, -5});
    return agent;
  };
  Rng tie(1);
  CHECK(describe(*env, converged(TieBreak::LowIndex).extract_greedy_policy(tie)) == "{A:a1, B:a1}");
  CHECK(describe(*env, converged(TieBreak::HighIndex).extract_greedy_policy(tie)) == "{A:a1, B:a2}");

  auto interfered = converged(TieBreak::Random);
  interfered.set_q_value(A, 0, {7, -3, -3});
  const auto policy = interfered.extract_greedy_policy(tie);
  CHECK(describe(*env, policy) == "{A:a2, C:a1}");
  CHECK(classify_policy(*env, policy) == 2);
}

TEST_CASE("traces stay within [0, 1]") {
  const auto env = Environment::create(parse_momdp(morl::testing::kStochasticChain));
  for (auto mode : {TraceMode::Literal, TraceMode::WatkinsReset}) {
    AgentConfig c;
    c.q_init = RewardVector{1, 1};
    c.utility = UtilitySpec::linear({1, 0.5});
    c.trace_mode = mode;
    c.lambda = 1.0;
    QLambdaAgent agent(c, env);
    Rng rng(17);
    for (int ep = 0; ep < 300; ++ep) {
      const double eps = 0.5;
      AugmentedState s{env->sample_start(rng), RewardVector::zeros(2)};
      agent.begin_episode();
      auto choice = agent.select_action(s, eps, rng);
      while (true) {
        const auto out = env->sample_step(s.state, choice.action, rng);
        AugmentedState next{out.next_state, s.accrued + out.reward};
        std::optional<ActionChoice> nc;
        if (!out.is_terminal) nc = agent.select_action(next, eps, rng);
        agent.learn_step(s, choice.action, out.reward, next, out.is_terminal, nc);
        for (const auto& [key, values] : agent.q_table()) {
          for (ActionId a = 0; a < values.size(); ++a) {
            const double e = agent.trace(key, a);
            CHECK(e >= 0.0);
            CHECK(e <= 1.0);
          }
        }
        if (out.is_terminal) break;
        s = next;
        choice = *nc;
      }
    }
  }
}

TEST_CASE("watkins reset zeroes traces after exploration, literal keeps them") {
  const auto env = fig1();
  const auto A = at(*env, "A");
  const auto B = at(*env, "B");
  for (auto mode : {TraceMode::Literal, TraceMode::WatkinsReset}) {
    AgentConfig c = greedy_config(0.5);
    c.trace_mode = mode;
    QLambdaAgent agent(c, env);
    agent.set_q_value(B, 0, {7, -1, -5});
    agent.set_q_value(B, 1, {0, 0, 0});
    agent.begin_episode();
    agent.learn_step(A, 0, {0, 0, 0}, B, false, ActionChoice{1, 0});
    CHECK(agent.trace(A, 0) == (mode == TraceMode::Literal ? 1.0 : 0.0));
  }
}

TEST_CASE("single-objective agent matches a scalar reference bit for bit") {
  const auto env = Environment::create(parse_momdp(kScalarChain));
  AgentConfig c;
  c.alpha = 0.3;
  c.gamma = 0.9;
  c.lambda = 0.8;
  c.epsilon0 = 0.3;
  c.episodes = 100;
  c.q_init = RewardVector{2.0};
  c.utility = UtilitySpec::linear({1.0});
  c.tie_break = TieBreak::Random;
  QLambdaAgent agent(c, env);
  ScalarQLambda reference(*env, c.alpha, c.gamma, c.lambda, 2.0, c.tol);
  Rng ra(555);
  Rng rb(555);
  for (std::size_t ep = 0; ep < c.episodes; ++ep) {
    const double eps = epsilon_at(c, ep);
    agent.run_episode(eps, ra);
    reference.episode(eps, rb);
    REQUIRE(agent.q_table().size() == reference.table().size());
    auto it = reference.table().begin();
    for (const auto& [key, values] : agent.q_table()) {
      REQUIRE(key.state == it->first.first);
      REQUIRE(key.accrued[0] == it->first.second);
      for (ActionId a = 0; a < values.size(); ++a) CHECK(values[a][0] == it->second[a]);
      ++it;
    }
  }
  CHECK(ra.uniform() == rb.uniform());
}

TEST_CASE("accrued reward is zero at every decision point of the built-ins") {
  for (const auto& name : builtin_names()) {
    const auto env = Environment::builtin(name);
    QLambdaAgent agent(AgentConfig{}, env);
    Rng rng(12);
    bool all_zero = true;
    auto probe = [&](const AugmentedState& s, std::size_t) -> std::optional<ActionId> {
      all_zero = all_zero && s.accrued.is_zero();
      return std::nullopt;
    };
    for (int ep = 0; ep < 300; ++ep) agent.run_episode(0.3, rng, probe);
    CHECK(all_zero);
    for (const auto& [key, values] : agent.q_table()) CHECK(key.accrued.is_zero());
  }
}

TEST_CASE("q-table dump") {
  const auto env = fig1();
  QLambdaAgent agent(greedy_config(1.0), env);
  Rng rng(1);
  agent.run_episode(0.0, rng);
  const std::string dump = agent.dump_q_table();
  CHECK(dump.rfind("state,accrued,action,q1,q2,q3\n", 0) == 0);
  CHECK(dump.find("B,0 0 0,a1,7,-1,-5\n") != std::string::npos);
}

}  // TEST_SUITE
