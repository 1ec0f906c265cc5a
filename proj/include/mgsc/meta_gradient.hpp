#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "mgsc/grid.hpp"
#include "mgsc/model.hpp"
#include "mgsc/q_learning.hpp"
#include "mgsc/rng.hpp"
#include "mgsc/transition.hpp"

namespace mgsc {

// Meta-objective for search control.
//
// Given value parameters theta and a query distribution d(eta) over the
// planning states, the expected planning update is
//
//   theta_bar(eta) = theta + alpha * sum_{s,a} pi(a|s) d(s;eta) delta(s,a) e_{s,a}
//
// where delta is the TD error of one model sample per (s, a) under theta and
// e_{s,a} is the one-hot gradient of a tabular q. The target theta_hat adds
// one more TD update on the real transition, evaluated at theta_bar, and is
// held constant when differentiating. The loss is ||theta_hat - theta_bar||^2.

/// One model draw for a (state, action) query.
struct PairSample {
  std::size_t state_index = 0;  ///< position in the strategy's support
  StateId state = 0;
  Action action = Action::Up;
  ModelSample outcome;
};

/// Everything the gradient needs about one term of the expected update.
struct PairRecord {
  PairSample sample;
  double td_error = 0.0;
  double policy_prob = 0.0;
  double state_prob = 0.0;
};

struct ExpectedUpdate {
  std::vector<PairRecord> records;
  std::vector<double> theta_bar;
};

/// One fresh model sample for every (support state, action), ordered by state
/// then action.
template <PlanningModel Model>
std::vector<PairSample> draw_pair_samples(const Model& model, std::span<const StateId> states,
                                          Rng& rng) {
  std::vector<PairSample> out;
  out.reserve(states.size() * kNumActions);
  for (std::size_t i = 0; i < states.size(); ++i)
    for (Action a : kActions) out.push_back({i, states[i], a, model.sample(states[i], a, rng)});
  return out;
}

/// theta_bar from fixed samples. `theta` is a flat (state x action) vector.
inline ExpectedUpdate expected_update(std::span<const double> theta, double alpha, double gamma,
                                      std::span<const double> state_probs, double epsilon,
                                      std::span<const PairSample> samples) {
  ExpectedUpdate eu;
  eu.theta_bar.assign(theta.begin(), theta.end());
  eu.records.reserve(samples.size());
  for (const PairSample& ps : samples) {
    if (ps.state_index >= state_probs.size())
      throw std::invalid_argument("expected_update: sample outside strategy support");
    const Transition t{ps.state, ps.action, ps.outcome.reward, ps.outcome.next_state,
                       ps.outcome.terminal};
    PairRecord rec;
    rec.sample = ps;
    rec.td_error = td_error(theta, gamma, t);
    rec.policy_prob = policy_probs(theta, ps.state, epsilon)[index(ps.action)];
    rec.state_prob = state_probs[ps.state_index];
    eu.theta_bar[QTable::slot(ps.state, ps.action)] +=
        alpha * rec.policy_prob * rec.state_prob * rec.td_error;
    eu.records.push_back(rec);
  }
  return eu;
}

/// Draws fresh samples from `model` and forms theta_bar.
template <PlanningModel Model>
ExpectedUpdate build_expected_update(std::span<const double> theta, double alpha, double gamma,
                                     std::span<const StateId> states,
                                     std::span<const double> state_probs, const Model& model,
                                     double epsilon, Rng& rng) {
  if (states.size() != state_probs.size())
    throw std::invalid_argument("build_expected_update: support/probability size mismatch");
  const auto samples = draw_pair_samples(model, states, rng);
  return expected_update(theta, alpha, gamma, state_probs, epsilon, samples);
}

/// theta_hat = theta_bar + alpha * Delta(real transition; theta_bar).
inline std::vector<double> target_params(std::span<const double> theta_bar, const Transition& real,
                                         double alpha, double gamma) {
  std::vector<double> hat(theta_bar.begin(), theta_bar.end());
  hat[QTable::slot(real.s, real.a)] += alpha * td_error(theta_bar, gamma, real);
  return hat;
}

inline double meta_loss(std::span<const double> theta_hat, std::span<const double> theta_bar) {
  if (theta_hat.size() != theta_bar.size())
    throw std::invalid_argument("meta_loss: shape mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < theta_hat.size(); ++i) {
    const double diff = theta_hat[i] - theta_bar[i];
    sum += diff * diff;
  }
  return sum;
}

/// dL/d(eta) with theta_hat held constant. Chains the loss through the
/// one-hot TD terms of theta_bar and the softmax Jacobian
/// dd_s/deta_j = d_s (1[s=j] - d_j).
inline std::vector<double> meta_gradient(const ExpectedUpdate& eu,
                                         std::span<const double> theta_hat, double alpha) {
  const auto& theta_bar = eu.theta_bar;
  if (theta_hat.size() != theta_bar.size())
    throw std::invalid_argument("meta_gradient: shape mismatch");
  std::size_t n = 0;
  for (const PairRecord& r : eu.records) n = std::max(n, r.sample.state_index + 1);

  // Per-state weight w_s = sum_a (theta_hat - theta_bar)[s,a] pi(a|s) delta(s,a).
  std::vector<double> weight(n, 0.0);
  std::vector<double> prob(n, 0.0);
  for (const PairRecord& r : eu.records) {
    const std::size_t slot = QTable::slot(r.sample.state, r.sample.action);
    weight[r.sample.state_index] += (theta_hat[slot] - theta_bar[slot]) * r.policy_prob * r.td_error;
    prob[r.sample.state_index] = r.state_prob;
  }
  double mean_weight = 0.0;
  for (std::size_t s = 0; s < n; ++s) mean_weight += weight[s] * prob[s];

  std::vector<double> grad(n);
  for (std::size_t j = 0; j < n; ++j) grad[j] = -2.0 * alpha * prob[j] * (weight[j] - mean_weight);
  return grad;
}

}  // namespace mgsc
