#include <cmath>

#include <gtest/gtest.h>

#include "mgsc/dyna.hpp"
#include "mgsc/model.hpp"
#include "mgsc/q_learning.hpp"
#include "mgsc/search_control.hpp"
#include "support/oracles.hpp"

namespace mgsc {
namespace {

TEST(PolicyProbs, FullTieIsUniform) {
  QTable q(3, 0.1, 0.9);
  for (double p : policy_probs(q, 0, 0.1)) EXPECT_DOUBLE_EQ(p, 0.25);
}

TEST(PolicyProbs, UniqueArgmax) {
  QTable q(3, 0.1, 0.9);
  q(1, Action::Left) = 0.5;
  const auto p = policy_probs(q, 1, 0.1);
  EXPECT_DOUBLE_EQ(p[index(Action::Left)], 0.925);
  EXPECT_DOUBLE_EQ(p[index(Action::Up)], 0.025);
  EXPECT_DOUBLE_EQ(p[index(Action::Down)], 0.025);
  EXPECT_DOUBLE_EQ(p[index(Action::Right)], 0.025);
}

TEST(PolicyProbs, TwoWayTieSplitsGreedyMass) {
  QTable q(1, 0.1, 0.9);
  q(0, Action::Up) = 1.0;
  q(0, Action::Right) = 1.0;
  const auto p = policy_probs(q, 0, 0.2);
  EXPECT_DOUBLE_EQ(p[index(Action::Up)], 0.05 + 0.4);
  EXPECT_DOUBLE_EQ(p[index(Action::Down)], 0.05);
}

TEST(PolicyProbs, SumsToOneOnRandomRows) {
  Rng rng(5);
  QTable q(20, 0.1, 0.9);
  for (double& v : q.mutable_values()) v = std::round(rng.uniform() * 4.0) / 4.0;  // force ties
  for (StateId s = 0; s < 20; ++s) {
    for (double eps : {0.0, 0.1, 0.5, 1.0}) {
      double total = 0.0;
      for (double p : policy_probs(q, s, eps)) total += p;
      EXPECT_NEAR(total, 1.0, 1e-12);
    }
  }
}

TEST(SelectAction, GreedyWithoutExploration) {
  QTable q(2, 0.1, 0.9);
  q(0, Action::Down) = 0.3;
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(select_action(q, 0, 0.0, rng), Action::Down);
}

TEST(SelectAction, FullExplorationIsUniform) {
  QTable q(2, 0.1, 0.9);
  q(0, Action::Down) = 0.3;
  Rng rng(2);
  const auto f = test::frequencies<Action>(10000, [&] { return select_action(q, 0, 1.0, rng); });
  for (Action a : kActions) EXPECT_NEAR(f.at(a), 0.25, 0.02);
}

TEST(SelectAction, FrequenciesMatchPolicyProbs) {
  Rng fill(3), rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    QTable q(1, 0.1, 0.9);
    for (double& v : q.mutable_values()) v = std::round(fill.uniform() * 3.0);
    const double eps = fill.uniform() * 0.5;
    const auto exact = policy_probs(q, 0, eps);
    const auto f = test::frequencies<Action>(10000, [&] { return select_action(q, 0, eps, rng); });
    for (Action a : kActions) EXPECT_NEAR(f.count(a) ? f.at(a) : 0.0, exact[index(a)], 0.02);
  }
}

TEST(TdDelta, TerminalRewardOne) {
  QTable q(3, 0.1, 0.9);
  const TdDelta d = td_delta(q, {0, Action::Right, 1.0, 2, true});
  EXPECT_DOUBLE_EQ(d.error, 1.0);
  EXPECT_EQ(d.state, 0u);
  EXPECT_EQ(d.action, Action::Right);
}

TEST(TdDelta, BootstrapsFromNextState) {
  QTable q(3, 0.1, 0.9);
  q(1, Action::Up) = 1.0;
  EXPECT_DOUBLE_EQ(td_delta(q, {0, Action::Right, 0.0, 1, false}).error, 0.9);
  // Terminal flag suppresses the bootstrap even if the row is nonzero.
  EXPECT_DOUBLE_EQ(td_delta(q, {0, Action::Right, 0.0, 1, true}).error, 0.0);
}

// Chain S . . T with Right toward the goal.
GridSpec chain() { return GridSpec::from_layout("chain", {"S..T"}); }

std::vector<Transition> all_chain_transitions(const GridSpec& g) {
  std::vector<Transition> out;
  for (StateId s : g.non_terminal_ids())
    for (Action a : kActions) {
      const StateId n = g.next(s, a);
      out.push_back({s, a, n == g.goal_ids()[0] ? 1.0 : 0.0, n, g.is_terminal(n)});
    }
  return out;
}

TEST(TdDelta, ZeroAtValueIterationFixedPoint) {
  const GridSpec g = chain();
  const auto star = test::value_iteration(g, g.goal_ids()[0], 0.9);
  QTable q(g.num_states(), 0.1, 0.9);
  q.mutable_values() = star;
  for (const Transition& t : all_chain_transitions(g)) EXPECT_NEAR(td_delta(q, t).error, 0.0, 1e-12);
}

TEST(QUpdate, SingleEntryChanges) {
  QTable q(3, 0.1, 0.9);
  q_update(q, {0, Action::Right, 1.0, 2, true});
  EXPECT_DOUBLE_EQ(q(0, Action::Right), 0.1);
  double sum = 0.0;
  for (double v : q.values()) sum += std::abs(v);
  EXPECT_DOUBLE_EQ(sum, 0.1);
}

TEST(QUpdate, ZeroErrorLeavesTableUnchanged) {
  QTable q(3, 0.1, 0.9);
  q(0, Action::Up) = 0.5;
  const std::vector<double> before(q.values().begin(), q.values().end());
  q_update(q, {0, Action::Up, 0.5, 1, true});
  EXPECT_EQ(std::vector<double>(q.values().begin(), q.values().end()), before);
}

TEST(QUpdate, RandomUpdatesTouchOneEntry) {
  Rng rng(9);
  QTable q(6, 0.3, 0.9);
  for (double& v : q.mutable_values()) v = rng.uniform();
  for (int i = 0; i < 200; ++i) {
    const std::vector<double> before(q.values().begin(), q.values().end());
    const Transition t{static_cast<StateId>(rng.below(6)), kActions[rng.below(4)],
                       static_cast<double>(rng.below(2)), static_cast<StateId>(rng.below(6)),
                       rng.bernoulli(0.3)};
    q_update(q, t);
    int changed = 0;
    for (std::size_t k = 0; k < before.size(); ++k) changed += before[k] != q.values()[k];
    EXPECT_LE(changed, 1);
    for (std::size_t k = 0; k < before.size(); ++k) {
      if (k == QTable::slot(t.s, t.a)) continue;
      EXPECT_EQ(before[k], q.values()[k]);
    }
  }
}

TEST(QUpdate, SweepsConvergeToValueIteration) {
  const GridSpec g = chain();
  const auto star = test::value_iteration(g, g.goal_ids()[0], 0.9);
  QTable q(g.num_states(), 0.5, 0.9);
  const auto transitions = all_chain_transitions(g);
  for (int sweep = 0; sweep < 2000; ++sweep)
    for (const Transition& t : transitions) q_update(q, t);
  for (std::size_t i = 0; i < star.size(); ++i) EXPECT_NEAR(q.values()[i], star[i], 1e-6);
}

TEST(Dyna, NoPlanningIsDirectUpdate) {
  const GridSpec g = make_tmaze();
  FixedTMazeModel model(g, 0.1);
  const auto strategy = uniform_strategy(g);
  QTable a(g.num_states(), 0.1, 0.9), b(g.num_states(), 0.1, 0.9);
  const Transition real{g.start_id(), Action::Up, 0.0, g.id_at(3, 4), false};
  a(g.id_at(3, 4), Action::Up) = 0.7;
  b(g.id_at(3, 4), Action::Up) = 0.7;
  Rng rng(1);
  EXPECT_TRUE(dyna_step(a, model, strategy, real, 0, 0.1, rng).empty());
  q_update(b, real);
  EXPECT_EQ(std::vector<double>(a.values().begin(), a.values().end()),
            std::vector<double>(b.values().begin(), b.values().end()));
}

TEST(Dyna, PointMassPlansOnlyFromThatState) {
  const GridSpec g = make_tmaze();
  FixedTMazeModel model(g, 0.1);
  const StateId target = g.id_at(2, 4);
  const auto strategy = point_mass_strategy(g, target);
  QTable q(g.num_states(), 0.5, 0.9);
  Rng fill(2), rng(3);
  for (double& v : q.mutable_values()) v = fill.uniform();
  const std::vector<double> before(q.values().begin(), q.values().end());
  const Transition real{g.start_id(), Action::Up, 0.0, g.id_at(3, 4), false};
  const auto used = dyna_step(q, model, strategy, real, 5, 0.1, rng);
  ASSERT_EQ(used.size(), 5u);
  for (const Transition& t : used) EXPECT_EQ(t.s, target);
  for (StateId s = 0; s < g.num_states(); ++s) {
    if (s == target || s == g.start_id()) continue;
    for (Action a : kActions) EXPECT_EQ(q(s, a), before[QTable::slot(s, a)]);
  }
}

TEST(Dyna, ScriptedReplayMatchesHandRolledUpdates) {
  // Zero slip, zero exploration, unique argmax: every planning transition is
  // determined, so the final table can be computed by hand.
  const GridSpec g = make_tmaze();
  FixedTMazeModel model(g, 0.0);
  const StateId s = g.id_at(2, 4);
  const StateId above = g.id_at(1, 4);
  const auto strategy = point_mass_strategy(g, s);
  QTable q(g.num_states(), 0.5, 0.9);
  q(s, Action::Up) = 0.2;
  q(above, Action::Up) = 0.6;
  const Transition real{g.start_id(), Action::Up, 0.0, g.id_at(3, 4), false};
  Rng rng(1);
  dyna_step(q, model, strategy, real, 3, 0.0, rng);

  double direct = 0.0 + 0.5 * (0.0 + 0.9 * 0.0 - 0.0);
  double v = 0.2;
  for (int i = 0; i < 3; ++i) v += 0.5 * (0.0 + 0.9 * 0.6 - v);
  EXPECT_DOUBLE_EQ(q(g.start_id(), Action::Up), direct);
  EXPECT_DOUBLE_EQ(q(s, Action::Up), v);
  EXPECT_DOUBLE_EQ(q(above, Action::Up), 0.6);
}

TEST(Dyna, FixedModelNeverWritesTerminalRows) {
  const GridSpec g = make_tmaze();
  FixedTMazeModel model(g, 0.1);
  const auto strategy = uniform_strategy(g);
  QTable q(g.num_states(), 0.5, 0.9);
  Rng rng(4);
  for (int i = 0; i < 2000; ++i) {
    const Transition real{g.start_id(), Action::Up, 0.0, g.id_at(3, 4), false};
    dyna_step(q, model, strategy, real, 5, 0.1, rng);
  }
  for (StateId t : g.terminal_ids())
    for (Action a : kActions) EXPECT_EQ(q(t, a), 0.0);
}

}  // namespace
}  // namespace mgsc
