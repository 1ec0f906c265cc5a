#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "mgsc/config.hpp"
#include "mgsc/dyna.hpp"
#include "mgsc/env.hpp"
#include "mgsc/grid.hpp"
#include "mgsc/model.hpp"
#include "mgsc/q_learning.hpp"
#include "mgsc/rng.hpp"
#include "mgsc/search_control.hpp"

namespace mgsc {

/// Query distribution recorded at a fraction of training.
struct Snapshot {
  double fraction = 0.0;
  std::uint64_t step = 0;
  std::vector<StateId> states;
  std::vector<double> probabilities;
};

struct MetricsLog {
  ExperimentConfig config;
  std::uint64_t seed = 0;
  GridSpec spec;
  std::vector<double> rewards;          ///< reward received at each step
  std::vector<std::uint64_t> episodes;  ///< episode index each step belongs to
  std::uint64_t episodes_completed = 0;
  std::uint64_t truncated_episodes = 0;
  std::vector<Snapshot> snapshots;
  QTable q;
  std::optional<RewardCountModel> learned_model;

  double total_reward() const {
    double sum = 0.0;
    for (double r : rewards) sum += r;
    return sum;
  }
};

inline GridSpec make_grid(EnvKind kind) {
  return kind == EnvKind::TMaze ? make_tmaze() : make_tworooms();
}

/// Step index (1-based, inclusive) at which a snapshot fraction is taken.
inline std::uint64_t snapshot_step(double fraction, std::uint64_t total_steps) {
  const auto s = static_cast<std::uint64_t>(std::llround(fraction * static_cast<double>(total_steps)));
  return std::max<std::uint64_t>(1, std::min(s, total_steps));
}

namespace detail {

using AnyModel = std::variant<std::monostate, FixedTMazeModel, RewardCountModel>;
using AnyStrategy = std::variant<std::monostate, FixedStrategy, MgscStrategy>;

inline AnyModel make_model(const ExperimentConfig& c, const GridSpec& g) {
  switch (c.model) {
    case ModelKind::None: return std::monostate{};
    case ModelKind::FixedTMaze: return FixedTMazeModel(g, c.epsilon_env);
    case ModelKind::LearnedCounts: return RewardCountModel(g, c.epsilon_env);
  }
  return std::monostate{};
}

inline AnyStrategy make_strategy(const ExperimentConfig& c, const GridSpec& g) {
  switch (c.strategy) {
    case StrategyKind::None: return std::monostate{};
    case StrategyKind::Uniform: return uniform_strategy(g);
    case StrategyKind::AvoidTerminal: return avoid_terminal_strategy(g);
    case StrategyKind::Mgsc: return MgscStrategy(g, c.meta_step_size);
  }
  return std::monostate{};
}

template <typename T>
inline constexpr bool is_none_v = std::is_same_v<T, std::monostate>;

template <typename Model, typename Strategy>
void run_loop(MetricsLog& log, GridWorld& env, Model& model, Strategy& strategy) {
  const ExperimentConfig& c = log.config;
  Rng env_rng = Rng::derive(log.seed, "env");
  Rng agent_rng = Rng::derive(log.seed, "agent");
  Rng planning_rng = Rng::derive(log.seed, "planning");
  Rng meta_rng = Rng::derive(log.seed, "meta");

  std::vector<std::uint64_t> snap_steps;
  for (double f : c.snapshot_fractions) snap_steps.push_back(snapshot_step(f, c.total_steps));
  std::size_t next_snap = 0;

  QTable& q = log.q;
  std::vector<double> pre_planning;
  StateId s = env.reset(env_rng);
  for (std::uint64_t t = 0; t < c.total_steps; ++t) {
    const std::uint64_t episode = env.state().episode_count + log.truncated_episodes;
    const Action a = select_action(q, s, c.epsilon, agent_rng);
    const StepOutcome o = env.step(a, env_rng);
    const Transition real{s, a, o.reward, o.next_state, o.terminal};
    log.rewards.push_back(o.reward);
    log.episodes.push_back(episode);

    if constexpr (is_none_v<Model>) {
      q_update(q, real);
    } else {
      model.update(real);
      q_update(q, real);
      if constexpr (std::is_same_v<Strategy, MgscStrategy>) {
        if (c.meta_uses_pre_planning_theta) pre_planning.assign(q.values().begin(), q.values().end());
      }
      plan(q, model, strategy, c.planning_steps, c.epsilon, planning_rng);
      if constexpr (std::is_same_v<Strategy, MgscStrategy>) {
        const std::span<const double> theta =
            c.meta_uses_pre_planning_theta ? std::span<const double>(pre_planning) : q.values();
        strategy.meta_update(theta, q.alpha(), q.gamma(), real, model, c.epsilon, meta_rng);
      }
    }

    while (next_snap < snap_steps.size() && snap_steps[next_snap] == t + 1) {
      if constexpr (!is_none_v<Strategy>) {
        const auto st = strategy.states();
        const auto pr = strategy.probabilities();
        log.snapshots.push_back({c.snapshot_fractions[next_snap], t + 1,
                                 std::vector<StateId>(st.begin(), st.end()),
                                 std::vector<double>(pr.begin(), pr.end())});
      }
      ++next_snap;
    }

    if (o.terminal) {
      s = env.reset(env_rng);
    } else if (o.truncated) {
      ++log.truncated_episodes;
      s = env.reset(env_rng);
    } else {
      s = o.next_state;
    }
  }
  log.episodes_completed = env.state().episode_count;
  if constexpr (std::is_same_v<Model, RewardCountModel>) log.learned_model = model;
}

}  // namespace detail

/// Runs one agent for `total_steps` environment interactions. Deterministic
/// in (config, seed); the environment, behaviour policy, planning and
/// meta-update each draw from their own substream of `seed`.
inline MetricsLog run_experiment(const ExperimentConfig& config, std::uint64_t seed) {
  validate(config);
  GridSpec spec = make_grid(config.environment);
  MetricsLog log{config, seed, spec, {}, {}, 0, 0, {}, QTable(spec.num_states(), config.step_size, config.gamma), std::nullopt};
  log.rewards.reserve(config.total_steps);
  log.episodes.reserve(config.total_steps);

  GridWorld env(spec, EnvParams{config.epsilon_env, config.swap_period, config.step_cap});
  auto model = detail::make_model(config, spec);
  auto strategy = detail::make_strategy(config, spec);
  std::visit(
      [&](auto& m, auto& st) {
        using M = std::decay_t<decltype(m)>;
        using S = std::decay_t<decltype(st)>;
        if constexpr (detail::is_none_v<M> == detail::is_none_v<S>) {
          detail::run_loop(log, env, m, st);
        }
      },
      model, strategy);
  return log;
}

}  // namespace mgsc
