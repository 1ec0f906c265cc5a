#pragma once

#include <concepts>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "mgsc/env.hpp"
#include "mgsc/grid.hpp"
#include "mgsc/rng.hpp"
#include "mgsc/transition.hpp"

namespace mgsc {

struct ModelSample {
  StateId next_state = 0;
  double reward = 0.0;
  bool terminal = false;
};

/// Discrete reward distribution as (value, probability), ascending by value.
using RewardDistribution = std::vector<std::pair<double, double>>;

/// Anything Dyna can plan with.
template <typename M>
concept PlanningModel = requires(M m, const M cm, StateId s, Action a, Rng& rng,
                                 const Transition& t) {
  { cm.sample(s, a, rng) } -> std::same_as<ModelSample>;
  { m.update(t) };
  { cm.reward_distribution(s, a) } -> std::same_as<RewardDistribution>;
};

/// Hand-specified TMaze model. Dynamics match the environment; the reward on
/// any transition into a terminal is a fair coin flip on {0, 1}, ignoring which
/// goal is active. Everywhere else the reward is 0.
class FixedTMazeModel {
 public:
  FixedTMazeModel(GridSpec spec, double epsilon_env)
      : spec_(std::move(spec)), slip_(default_slip(spec_)), epsilon_env_(epsilon_env) {}
  FixedTMazeModel(GridSpec spec, double epsilon_env, SlipKind slip)
      : spec_(std::move(spec)), slip_(slip), epsilon_env_(epsilon_env) {}

  ModelSample sample(StateId s, Action a, Rng& rng) const {
    const StepOutcome o = true_transition_sample(spec_, slip_, epsilon_env_, s, a, 0, rng);
    ModelSample out{o.next_state, 0.0, o.terminal};
    if (o.terminal) out.reward = rng.bernoulli(0.5) ? 1.0 : 0.0;
    return out;
  }

  void update(const Transition&) {}

  /// Reward distribution conditioned on the landing state.
  RewardDistribution reward_distribution(StateId s, Action /*a*/, StateId s_next) const {
    require_non_terminal(spec_, s, "FixedTMazeModel::reward_distribution");
    if (spec_.is_terminal(s_next)) return {{0.0, 0.5}, {1.0, 0.5}};
    return {{0.0, 1.0}};
  }

  /// Reward distribution marginalised over the next state.
  RewardDistribution reward_distribution(StateId s, Action a) const {
    double p_terminal = 0.0;
    for (auto [n, p] : transition_distribution(spec_, slip_, epsilon_env_, s, a))
      if (spec_.is_terminal(n)) p_terminal += p;
    if (p_terminal == 0.0) return {{0.0, 1.0}};
    return {{0.0, 1.0 - 0.5 * p_terminal}, {1.0, 0.5 * p_terminal}};
  }

  const GridSpec& spec() const noexcept { return spec_; }

 private:
  GridSpec spec_;
  SlipKind slip_;
  double epsilon_env_;
};

/// Learned model: ground-truth dynamics, rewards drawn in proportion to the
/// counts of each reward value observed at (s, a). Unseen pairs yield 0.
class RewardCountModel {
 public:
  struct Row {
    StateId state;
    Action action;
    double reward;
    std::uint64_t count;
  };

  RewardCountModel(GridSpec spec, double epsilon_env)
      : RewardCountModel(std::move(spec), epsilon_env, SlipKind::RandomNeighbour, false) {}
  RewardCountModel(GridSpec spec, double epsilon_env, SlipKind slip)
      : RewardCountModel(std::move(spec), epsilon_env, slip, true) {}

  ModelSample sample(StateId s, Action a, Rng& rng) const {
    const StepOutcome o = true_transition_sample(spec_, slip_, epsilon_env_, s, a, 0, rng);
    ModelSample out{o.next_state, 0.0, o.terminal};
    const auto& hist = counts_[slot(s, a)];
    const std::uint64_t total = total_[slot(s, a)];
    if (total == 0) return out;
    // Inverse CDF over the ordered histogram.
    const double u = rng.uniform() * static_cast<double>(total);
    double acc = 0.0;
    for (const auto& [value, n] : hist) {
      acc += static_cast<double>(n);
      out.reward = value;
      if (u < acc) break;
    }
    return out;
  }

  void update(const Transition& t) {
    ++counts_[slot(t.s, t.a)][t.r];
    ++total_[slot(t.s, t.a)];
  }

  RewardDistribution reward_distribution(StateId s, Action a) const {
    require_non_terminal(spec_, s, "RewardCountModel::reward_distribution");
    const std::uint64_t total = total_[slot(s, a)];
    if (total == 0) return {{0.0, 1.0}};
    RewardDistribution out;
    for (const auto& [value, n] : counts_[slot(s, a)])
      out.emplace_back(value, static_cast<double>(n) / static_cast<double>(total));
    return out;
  }

  std::uint64_t count(StateId s, Action a, double reward) const {
    const auto& hist = counts_.at(slot(s, a));
    const auto it = hist.find(reward);
    return it == hist.end() ? 0 : it->second;
  }

  std::uint64_t total(StateId s, Action a) const { return total_.at(slot(s, a)); }

  /// Every nonzero count, ordered by (state, action, reward).
  std::vector<Row> rows() const {
    std::vector<Row> out;
    for (StateId s = 0; s < spec_.num_states(); ++s)
      for (Action a : kActions)
        for (const auto& [value, n] : counts_[slot(s, a)]) out.push_back({s, a, value, n});
    return out;
  }

  const GridSpec& spec() const noexcept { return spec_; }

 private:
  RewardCountModel(GridSpec spec, double epsilon_env, SlipKind slip, bool explicit_slip)
      : spec_(std::move(spec)),
        slip_(explicit_slip ? slip : default_slip(spec_)),
        epsilon_env_(epsilon_env),
        counts_(spec_.num_states() * kNumActions),
        total_(spec_.num_states() * kNumActions, 0) {}

  std::size_t slot(StateId s, Action a) const { return s * kNumActions + index(a); }

  GridSpec spec_;
  SlipKind slip_;
  double epsilon_env_;
  std::vector<std::map<double, std::uint64_t>> counts_;
  std::vector<std::uint64_t> total_;
};

static_assert(PlanningModel<FixedTMazeModel>);
static_assert(PlanningModel<RewardCountModel>);

}  // namespace mgsc
