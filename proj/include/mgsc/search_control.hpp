#pragma once

#include <cmath>
#include <concepts>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mgsc/adam.hpp"
#include "mgsc/grid.hpp"
#include "mgsc/meta_gradient.hpp"
#include "mgsc/model.hpp"
#include "mgsc/rng.hpp"
#include "mgsc/softmax.hpp"

namespace mgsc {

/// A distribution over the states planning may start from.
template <typename S>
concept SearchControl = requires(const S cs, Rng& rng) {
  { cs.sample_state(rng) } -> std::same_as<StateId>;
  { cs.states() } -> std::convertible_to<std::span<const StateId>>;
  { cs.probabilities() } -> std::convertible_to<std::span<const double>>;
};

/// Fixed query distribution over non-terminal states.
class FixedStrategy {
 public:
  FixedStrategy(const GridSpec& spec, std::vector<StateId> states, std::vector<double> probs)
      : states_(std::move(states)), probs_(std::move(probs)) {
    if (states_.size() != probs_.size() || states_.empty())
      throw std::invalid_argument("FixedStrategy: support and probabilities differ in size");
    double total = 0.0;
    for (std::size_t i = 0; i < states_.size(); ++i) {
      if (states_[i] >= spec.num_states() || spec.is_terminal(states_[i]))
        throw std::invalid_argument("FixedStrategy: support must be non-terminal states");
      if (!(probs_[i] >= 0.0)) throw std::invalid_argument("FixedStrategy: negative probability");
      total += probs_[i];
    }
    if (std::abs(total - 1.0) > 1e-9)
      throw std::invalid_argument("FixedStrategy: probabilities sum to " + std::to_string(total));
  }

  StateId sample_state(Rng& rng) const { return states_[rng.categorical(probs_)]; }
  std::span<const StateId> states() const noexcept { return states_; }
  std::span<const double> probabilities() const noexcept { return probs_; }

 private:
  std::vector<StateId> states_;
  std::vector<double> probs_;
};

inline FixedStrategy uniform_strategy(const GridSpec& spec) {
  const auto& states = spec.non_terminal_ids();
  return FixedStrategy(spec, states,
                       std::vector<double>(states.size(), 1.0 / static_cast<double>(states.size())));
}

inline FixedStrategy point_mass_strategy(const GridSpec& spec, StateId s) {
  return FixedStrategy(spec, {s}, {1.0});
}

/// Hand-designed TMaze distribution: no mass on the cells next to the
/// terminals, and the remaining horizontal-hallway cells weighted twice as
/// heavily as the vertical hallway.
inline FixedStrategy avoid_terminal_strategy(const GridSpec& spec) {
  if (!is_tmaze(spec)) throw std::invalid_argument("avoid_terminal_strategy: requires the TMaze");
  const auto pre_terminal = goal_adjacent_ids(spec);
  const auto horizontal = tmaze_horizontal_ids(spec);
  auto contains = [](const std::vector<StateId>& v, StateId s) {
    return std::find(v.begin(), v.end(), s) != v.end();
  };
  std::vector<StateId> states;
  std::vector<double> weights;
  double total = 0.0;
  for (StateId s : spec.non_terminal_ids()) {
    if (contains(pre_terminal, s)) continue;
    const double w = contains(horizontal, s) ? 2.0 : 1.0;
    states.push_back(s);
    weights.push_back(w);
    total += w;
  }
  for (double& w : weights) w /= total;
  return FixedStrategy(spec, std::move(states), std::move(weights));
}

/// Learned query distribution: softmax over one logit per non-terminal state,
/// trained online with Adam on the meta-loss.
class MgscStrategy {
 public:
  struct MetaStep {
    double loss = 0.0;
    double grad_norm = 0.0;
  };

  MgscStrategy(const GridSpec& spec, double meta_step_size)
      : states_(spec.non_terminal_ids()),
        eta_(states_.size(), 0.0),
        adam_(states_.size(), meta_step_size),
        probs_(softmax_probs(eta_)) {}

  StateId sample_state(Rng& rng) const { return states_[rng.categorical(probs_)]; }
  std::span<const StateId> states() const noexcept { return states_; }
  std::span<const double> probabilities() const noexcept { return probs_; }
  std::span<const double> logits() const noexcept { return eta_; }
  const AdamState& adam() const noexcept { return adam_; }

  /// One meta-update. `theta` is the table the expected update is built
  /// from; `real` is this timestep's environment transition.
  template <PlanningModel Model>
  MetaStep meta_update(std::span<const double> theta, double alpha, double gamma,
                       const Transition& real, const Model& model, double epsilon, Rng& rng) {
    const ExpectedUpdate eu =
        build_expected_update(theta, alpha, gamma, states_, probs_, model, epsilon, rng);
    const auto hat = target_params(eu.theta_bar, real, alpha, gamma);
    const auto grad = meta_gradient(eu, hat, alpha);
    MetaStep out;
    out.loss = meta_loss(hat, eu.theta_bar);
    for (double g : grad) out.grad_norm += g * g;
    out.grad_norm = std::sqrt(out.grad_norm);
    adam_step(adam_, eta_, grad);
    probs_ = softmax_probs(eta_);
    return out;
  }

 private:
  std::vector<StateId> states_;
  std::vector<double> eta_;
  AdamState adam_;
  std::vector<double> probs_;
};

static_assert(SearchControl<FixedStrategy>);
static_assert(SearchControl<MgscStrategy>);

}  // namespace mgsc
