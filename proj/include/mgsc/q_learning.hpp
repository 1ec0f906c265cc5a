#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "mgsc/grid.hpp"
#include "mgsc/rng.hpp"
#include "mgsc/transition.hpp"

namespace mgsc {

using ActionProbs = std::array<double, kNumActions>;

/// Dense tabular action-value estimates, zero-initialised.
class QTable {
 public:
  QTable(std::size_t num_states, double alpha, double gamma)
      : values_(num_states * kNumActions, 0.0), num_states_(num_states), alpha_(alpha),
        gamma_(gamma) {
    if (!(alpha >= 0.0)) throw std::invalid_argument("QTable: step-size must be >= 0");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("QTable: gamma outside [0,1)");
  }

  double operator()(StateId s, Action a) const { return values_[slot(s, a)]; }
  double& operator()(StateId s, Action a) { return values_[slot(s, a)]; }

  static std::size_t slot(StateId s, Action a) noexcept { return s * kNumActions + index(a); }

  std::span<const double> row(StateId s) const {
    return std::span<const double>(values_).subspan(s * kNumActions, kNumActions);
  }

  std::size_t num_states() const noexcept { return num_states_; }
  double alpha() const noexcept { return alpha_; }
  double gamma() const noexcept { return gamma_; }

  std::span<const double> values() const noexcept { return values_; }
  std::vector<double>& mutable_values() noexcept { return values_; }

 private:
  std::vector<double> values_;
  std::size_t num_states_;
  double alpha_;
  double gamma_;
};

/// Max over the action row of a flat (state x action) parameter vector.
inline double max_value(std::span<const double> params, StateId s) {
  const auto row = params.subspan(s * kNumActions, kNumActions);
  return *std::max_element(row.begin(), row.end());
}

/// TD error r + gamma * max_a' q(s', a') - q(s, a) against a flat parameter
/// vector. The bootstrap term is zero when the transition terminates.
inline double td_error(std::span<const double> params, double gamma, const Transition& t) {
  const double bootstrap = t.terminal ? 0.0 : gamma * max_value(params, t.s_next);
  return t.r + bootstrap - params[QTable::slot(t.s, t.a)];
}

struct TdDelta {
  double error;
  StateId state;
  Action action;
};

/// TD error plus the single table entry its (one-hot) gradient touches.
inline TdDelta td_delta(const QTable& q, const Transition& t) {
  return {td_error(q.values(), q.gamma(), t), t.s, t.a};
}

/// Semi-gradient Q-Learning update; returns the TD error applied.
inline double q_update(QTable& q, const Transition& t) {
  const TdDelta d = td_delta(q, t);
  q(d.state, d.action) += q.alpha() * d.error;
  return d.error;
}

/// Epsilon-greedy action distribution. Ties for the max split the greedy mass.
inline ActionProbs policy_probs(std::span<const double> params, StateId s, double epsilon) {
  const auto row = params.subspan(s * kNumActions, kNumActions);
  const double best = *std::max_element(row.begin(), row.end());
  std::size_t ties = 0;
  for (double v : row) ties += v == best ? 1 : 0;
  ActionProbs p{};
  for (std::size_t a = 0; a < kNumActions; ++a) {
    p[a] = epsilon / kNumActions;
    if (row[a] == best) p[a] += (1.0 - epsilon) / static_cast<double>(ties);
  }
  return p;
}

inline ActionProbs policy_probs(const QTable& q, StateId s, double epsilon) {
  return policy_probs(q.values(), s, epsilon);
}

/// Draws an epsilon-greedy action; ties among maximisers broken uniformly.
inline Action select_action(const QTable& q, StateId s, double epsilon, Rng& rng) {
  if (rng.bernoulli(epsilon)) return kActions[rng.below(kNumActions)];
  const auto row = q.row(s);
  const double best = *std::max_element(row.begin(), row.end());
  std::array<Action, kNumActions> maximisers{};
  std::size_t n = 0;
  for (std::size_t a = 0; a < kNumActions; ++a)
    if (row[a] == best) maximisers[n++] = kActions[a];
  return n == 1 ? maximisers[0] : maximisers[rng.below(n)];
}

inline Action greedy_action(const QTable& q, StateId s) {
  const auto row = q.row(s);
  return kActions[static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin())];
}

}  // namespace mgsc
