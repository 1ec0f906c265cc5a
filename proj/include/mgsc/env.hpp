#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mgsc/grid.hpp"
#include "mgsc/rng.hpp"

namespace mgsc {

/// How slip noise is applied. The TMaze moves the agent to a random
/// neighbouring cell; TwoRooms replaces the chosen action with a random one.
enum class SlipKind : std::uint8_t { RandomNeighbour, RandomAction };

inline SlipKind default_slip(const GridSpec& g) {
  return is_tmaze(g) ? SlipKind::RandomNeighbour : SlipKind::RandomAction;
}

struct EnvParams {
  double epsilon_env = 0.1;
  std::uint64_t swap_period = 600;
  std::uint64_t step_cap = 10'000;
};

struct StepOutcome {
  StateId next_state = 0;
  double reward = 0.0;
  bool terminal = false;
  /// Episode hit the step cap; the caller must reset. Not a terminal for
  /// bootstrapping purposes.
  bool truncated = false;
};

inline void require_non_terminal(const GridSpec& g, StateId s, const char* who) {
  if (s >= g.num_states()) throw std::out_of_range(std::string(who) + ": state out of range");
  if (g.is_terminal(s))
    throw std::logic_error(std::string(who) + ": transition requested from terminal state " +
                           std::to_string(s));
}

/// Reward and termination for landing in `next` while goal `active_goal` is live.
inline StepOutcome outcome_for(const GridSpec& g, StateId next, int active_goal) {
  StepOutcome o;
  o.next_state = next;
  o.terminal = g.is_terminal(next);
  o.reward = next == g.goal_ids()[static_cast<std::size_t>(active_goal)] ? 1.0 : 0.0;
  return o;
}

/// Side-effect-free draw from the environment's transition kernel.
inline StepOutcome true_transition_sample(const GridSpec& g, SlipKind slip, double epsilon_env,
                                          StateId state, Action action, int active_goal,
                                          Rng& rng) {
  require_non_terminal(g, state, "true_transition_sample");
  StateId next = g.next(state, action);
  if (rng.bernoulli(epsilon_env)) {
    if (slip == SlipKind::RandomAction) {
      next = g.next(state, kActions[rng.below(kNumActions)]);
    } else {
      const auto nbrs = g.neighbours(state);
      if (!nbrs.empty()) next = nbrs[rng.below(nbrs.size())];
    }
  }
  return outcome_for(g, next, active_goal);
}

/// Exact next-state distribution of true_transition_sample, as (state, prob)
/// pairs with distinct states.
inline std::vector<std::pair<StateId, double>> transition_distribution(const GridSpec& g,
                                                                       SlipKind slip,
                                                                       double epsilon_env,
                                                                       StateId state,
                                                                       Action action) {
  require_non_terminal(g, state, "transition_distribution");
  std::vector<std::pair<StateId, double>> out;
  auto add = [&out](StateId s, double p) {
    for (auto& [t, q] : out) {
      if (t == s) {
        q += p;
        return;
      }
    }
    out.emplace_back(s, p);
  };
  add(g.next(state, action), 1.0 - epsilon_env);
  if (slip == SlipKind::RandomAction) {
    for (Action a : kActions) add(g.next(state, a), epsilon_env / kNumActions);
  } else {
    const auto nbrs = g.neighbours(state);
    if (nbrs.empty()) {
      add(g.next(state, action), epsilon_env);
    } else {
      for (StateId n : nbrs) add(n, epsilon_env / static_cast<double>(nbrs.size()));
    }
  }
  return out;
}

struct EnvState {
  StateId position = 0;
  std::uint64_t episode_count = 0;
  int active_goal = 0;
  std::uint64_t steps_in_episode = 0;
};

/// Episodic, non-stationary gridworld. The rewarding goal alternates every
/// `swap_period` completed episodes.
class GridWorld {
 public:
  GridWorld(GridSpec spec, EnvParams params)
      : GridWorld(std::move(spec), params, SlipKind::RandomNeighbour, false) {}
  GridWorld(GridSpec spec, EnvParams params, SlipKind slip)
      : GridWorld(std::move(spec), params, slip, true) {}

  StateId reset(Rng& /*rng*/) {
    state_.position = spec_.start_id();
    state_.steps_in_episode = 0;
    return state_.position;
  }

  StepOutcome step(Action action, Rng& rng) {
    StepOutcome o = true_transition_sample(spec_, slip_, params_.epsilon_env, state_.position,
                                           action, state_.active_goal, rng);
    state_.position = o.next_state;
    ++state_.steps_in_episode;
    if (o.terminal) {
      ++state_.episode_count;
      state_.active_goal = goal_for_episode(state_.episode_count);
    } else if (state_.steps_in_episode >= params_.step_cap) {
      o.truncated = true;
    }
    return o;
  }

  int goal_for_episode(std::uint64_t completed_episodes) const {
    return static_cast<int>((completed_episodes / params_.swap_period) % 2);
  }

  const GridSpec& spec() const noexcept { return spec_; }
  const EnvParams& params() const noexcept { return params_; }
  SlipKind slip() const noexcept { return slip_; }
  const EnvState& state() const noexcept { return state_; }

 private:
  GridWorld(GridSpec spec, EnvParams params, SlipKind slip, bool explicit_slip)
      : spec_(std::move(spec)), params_(params), slip_(explicit_slip ? slip : default_slip(spec_)) {
    if (params_.epsilon_env < 0.0 || params_.epsilon_env > 1.0)
      throw std::invalid_argument("GridWorld: epsilon_env outside [0,1]");
    if (params_.swap_period == 0) throw std::invalid_argument("GridWorld: swap_period must be > 0");
    if (params_.step_cap == 0) throw std::invalid_argument("GridWorld: step_cap must be > 0");
    state_.position = spec_.start_id();
  }

  GridSpec spec_;
  EnvParams params_;
  SlipKind slip_;
  EnvState state_;
};

}  // namespace mgsc
