#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "mgsc/env.hpp"
#include "mgsc/grid.hpp"
#include "support/oracles.hpp"

namespace mgsc {
namespace {

TEST(GridSpec, TMazeLayout) {
  const GridSpec g = make_tmaze();
  EXPECT_EQ(g.num_states(), 13u);
  EXPECT_EQ(g.non_terminal_ids().size(), 11u);
  EXPECT_EQ(g.terminal_ids().size(), 2u);
  // Start at the bottom of the vertical hallway, directly below the junction.
  const Cell& start = g.cell(g.start_id());
  EXPECT_EQ(start.row, 4);
  EXPECT_EQ(start.col, 4);
  EXPECT_EQ(tmaze_vertical_ids(g).size(), 5u);
  EXPECT_EQ(tmaze_horizontal_ids(g).size(), 6u);
  EXPECT_EQ(goal_adjacent_ids(g).size(), 2u);
}

TEST(GridSpec, TwoRoomsLayout) {
  const GridSpec g = make_tworooms();
  EXPECT_EQ(g.num_states(), 51u);
  EXPECT_EQ(g.non_terminal_ids().size(), 49u);
  const Cell& start = g.cell(g.start_id());
  EXPECT_EQ(start.row, 4);
  EXPECT_EQ(start.col, 0);
  EXPECT_EQ(g.cell(g.goal_ids()[0]).row, 0);
  EXPECT_EQ(g.cell(g.goal_ids()[1]).row, 4);
  EXPECT_EQ(g.cell(g.goal_ids()[0]).col, 10);
  EXPECT_EQ(goal_adjacent_ids(g).size(), 4u);
}

TEST(GridSpec, AdjacencyIsClosed) {
  for (const GridSpec& g : {make_tmaze(), make_tworooms()}) {
    for (StateId s = 0; s < g.num_states(); ++s) {
      for (Action a : kActions) {
        const StateId n = g.next(s, a);
        ASSERT_LT(n, g.num_states());
        const int dist = std::abs(g.cell(n).row - g.cell(s).row) + std::abs(g.cell(n).col - g.cell(s).col);
        EXPECT_LE(dist, 1);
      }
    }
  }
  const GridSpec t = make_tmaze();
  // Hallway cell left of the junction: up and down run into walls.
  const StateId west = t.id_at(0, 3);
  EXPECT_EQ(t.next(west, Action::Up), west);
  EXPECT_EQ(t.next(west, Action::Down), west);
}

TEST(GridSpec, RejectsBadLayouts) {
  EXPECT_THROW(GridSpec::from_layout("x", {"S.T", "S.."}), std::invalid_argument);
  EXPECT_THROW(GridSpec::from_layout("x", {"..T"}), std::invalid_argument);
  EXPECT_THROW(GridSpec::from_layout("x", {"S#.T"}), std::invalid_argument);  // unreachable
  EXPECT_THROW(GridSpec::from_layout("x", {"S.?T"}), std::invalid_argument);
}

TEST(GridSpec, AsciiRenderRoundTripsLayout) {
  const GridSpec g = make_tmaze();
  EXPECT_EQ(render_ascii(g), "T...J...T\n####.####\n####.####\n####.####\n####S####\n");
  const std::string marked = render_ascii(g, g.start_id(), 1);
  EXPECT_NE(marked.find('@'), std::string::npos);
  EXPECT_EQ(marked.substr(0, 9), "T...J...G");
}

TEST(GridWorld, ResetIsIdempotent) {
  GridWorld env(make_tmaze(), {});
  Rng rng(1);
  const StateId a = env.reset(rng);
  const StateId b = env.reset(rng);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, env.spec().start_id());
  EXPECT_EQ(env.state().episode_count, 0u);

  GridWorld rooms(make_tworooms(), {});
  EXPECT_EQ(rooms.reset(rng), rooms.spec().id_at(4, 0));
}

TEST(GridWorld, DeterministicStepUp) {
  GridWorld env(make_tmaze(), {0.0, 600, 10000});
  Rng rng(3);
  env.reset(rng);
  const StepOutcome o = env.step(Action::Up, rng);
  EXPECT_EQ(o.next_state, env.spec().id_at(3, 4));
  EXPECT_EQ(o.reward, 0.0);
  EXPECT_FALSE(o.terminal);
}

TEST(GridWorld, ReachingActiveGoalPaysOne) {
  GridWorld env(make_tmaze(), {0.0, 600, 10000});
  Rng rng(3);
  env.reset(rng);
  for (int i = 0; i < 4; ++i) env.step(Action::Up, rng);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(env.step(Action::Left, rng).reward, 0.0);
  const StepOutcome o = env.step(Action::Left, rng);
  EXPECT_TRUE(o.terminal);
  EXPECT_EQ(o.reward, 1.0);  // goal 0 (left) is active first
  EXPECT_EQ(env.state().episode_count, 1u);
  EXPECT_THROW(env.step(Action::Left, rng), std::logic_error);
}

TEST(GridWorld, InactiveGoalTerminatesWithoutReward) {
  GridWorld env(make_tmaze(), {0.0, 600, 10000});
  Rng rng(3);
  env.reset(rng);
  for (int i = 0; i < 4; ++i) env.step(Action::Up, rng);
  StepOutcome o;
  for (int i = 0; i < 4; ++i) o = env.step(Action::Right, rng);
  EXPECT_TRUE(o.terminal);
  EXPECT_EQ(o.reward, 0.0);
}

TEST(GridWorld, GoalsSwapEverySwapPeriod) {
  GridWorld env(make_tmaze(), {0.0, 600, 10000});
  Rng rng(5);
  auto run_left_episode = [&] {
    env.reset(rng);
    for (int i = 0; i < 4; ++i) env.step(Action::Up, rng);
    StepOutcome o;
    for (int i = 0; i < 4; ++i) o = env.step(Action::Left, rng);
    return o.reward;
  };
  for (int ep = 1; ep <= 1800; ++ep) {
    const double r = run_left_episode();
    // Episodes 1..600 reward the left goal, 601..1200 the right, and so on.
    const bool left_active = ((ep - 1) / 600) % 2 == 0;
    ASSERT_EQ(r, left_active ? 1.0 : 0.0) << "episode " << ep;
  }
  EXPECT_EQ(env.state().active_goal, 1);
  EXPECT_EQ(env.goal_for_episode(600), 1);
  EXPECT_EQ(env.goal_for_episode(599), 0);
  EXPECT_EQ(env.goal_for_episode(1200), 0);
}

TEST(GridWorld, StepCapTruncatesWithoutCountingEpisode) {
  GridWorld env(make_tmaze(), {0.0, 600, 3});
  Rng rng(1);
  env.reset(rng);
  EXPECT_FALSE(env.step(Action::Down, rng).truncated);
  EXPECT_FALSE(env.step(Action::Down, rng).truncated);
  const StepOutcome o = env.step(Action::Down, rng);
  EXPECT_TRUE(o.truncated);
  EXPECT_FALSE(o.terminal);
  EXPECT_EQ(o.reward, 0.0);
  EXPECT_EQ(env.state().episode_count, 0u);
}

TEST(GridWorld, ZeroSlipTrajectoriesAreDeterministic) {
  const std::vector<Action> script{Action::Up, Action::Left, Action::Up, Action::Up,
                                   Action::Right, Action::Up, Action::Right, Action::Right};
  std::vector<StateId> first, second;
  for (auto* out : {&first, &second}) {
    GridWorld env(make_tmaze(), {0.0, 600, 10000});
    Rng rng(out == &first ? 11 : 99);
    env.reset(rng);
    for (Action a : script) {
      const auto o = env.step(a, rng);
      out->push_back(o.next_state);
      if (o.terminal) break;
    }
  }
  EXPECT_EQ(first, second);
}

TEST(TrueTransition, ZeroSlipMatchesAdjacency) {
  const GridSpec g = make_tworooms();
  Rng rng(2);
  for (StateId s : g.non_terminal_ids())
    for (Action a : kActions)
      EXPECT_EQ(true_transition_sample(g, SlipKind::RandomAction, 0.0, s, a, 0, rng).next_state,
                g.next(s, a));
  // Into the wall: stay put.
  const StateId corner = g.id_at(4, 0);
  EXPECT_EQ(true_transition_sample(g, SlipKind::RandomAction, 0.0, corner, Action::Left, 0, rng)
                .next_state,
            corner);
}

TEST(TrueTransition, RejectsTerminalState) {
  const GridSpec g = make_tmaze();
  Rng rng(2);
  EXPECT_THROW(true_transition_sample(g, SlipKind::RandomNeighbour, 0.1, g.goal_ids()[0],
                                      Action::Up, 0, rng),
               std::logic_error);
}

// Frequencies of the sampler against the enumerated kernel, for both slip
// semantics, at every non-terminal state of each grid.
TEST(TrueTransition, MatchesEnumeratedDistribution) {
  struct Case {
    GridSpec g;
    SlipKind slip;
  };
  for (const Case& c : {Case{make_tmaze(), SlipKind::RandomNeighbour},
                        Case{make_tworooms(), SlipKind::RandomAction}}) {
    Rng rng(17);
    for (StateId s : {c.g.start_id(), goal_adjacent_ids(c.g).front(), c.g.non_terminal_ids()[3]}) {
      const Action a = Action::Right;
      const auto exact = transition_distribution(c.g, c.slip, 0.1, s, a);
      const auto freq = test::frequencies<StateId>(100000, [&] {
        return true_transition_sample(c.g, c.slip, 0.1, s, a, 0, rng).next_state;
      });
      double total = 0.0;
      for (auto [n, p] : exact) {
        total += p;
        const double f = freq.count(n) ? freq.at(n) : 0.0;
        EXPECT_NEAR(f, p, 0.01) << c.g.name() << " state " << s << " -> " << n;
      }
      EXPECT_NEAR(total, 1.0, 1e-12);
      for (auto [n, f] : freq) {
        const bool listed = std::any_of(exact.begin(), exact.end(), [n = n](auto e) { return e.first == n; });
        EXPECT_TRUE(listed) << "unexpected next state " << n;
      }
    }
  }
}

TEST(TrueTransition, StepAndSamplerShareDistribution) {
  for (const GridSpec& g : {make_tmaze(), make_tworooms()}) {
    GridWorld env(g, {0.1, 600, 10000});
    Rng env_rng(4), sampler_rng(5);
    const int n = 100000;
    std::map<StateId, double> from_env, from_sampler;
    for (int i = 0; i < n; ++i) {
      env.reset(env_rng);
      from_env[env.step(Action::Up, env_rng).next_state] += 1.0 / n;
      const auto o = true_transition_sample(g, env.slip(), 0.1, g.start_id(), Action::Up, 0,
                                            sampler_rng);
      from_sampler[o.next_state] += 1.0 / n;
    }
    for (auto [next, p] : transition_distribution(g, env.slip(), 0.1, g.start_id(), Action::Up)) {
      EXPECT_NEAR(from_env[next], p, 0.01) << g.name();
      EXPECT_NEAR(from_sampler[next], p, 0.01) << g.name();
    }
    EXPECT_EQ(env.state().episode_count, 0u);
  }
}

TEST(TrueTransition, SlipFrequencyWithinBinomialBand) {
  const GridSpec g = make_tmaze();
  const StateId s = g.id_at(2, 4);  // vertical hallway; Left runs into a wall
  Rng rng(8);
  int slipped = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i)
    slipped += true_transition_sample(g, SlipKind::RandomNeighbour, 0.1, s, Action::Left, 0, rng)
                   .next_state != s;
  const double freq = static_cast<double>(slipped) / n;
  EXPECT_GE(freq, 0.08);
  EXPECT_LE(freq, 0.12);
}

TEST(GridWorld, EpisodeRewardIsZeroOrOne) {
  GridWorld env(make_tworooms(), {0.1, 3, 10000});
  Rng rng(21);
  for (int ep = 0; ep < 50; ++ep) {
    env.reset(rng);
    double total = 0.0;
    for (;;) {
      const auto o = env.step(kActions[rng.below(4)], rng);
      total += o.reward;
      if (o.terminal || o.truncated) break;
    }
    EXPECT_TRUE(total == 0.0 || total == 1.0);
  }
}

}  // namespace
}  // namespace mgsc
