#pragma once

#include <vector>

#include "mgsc/model.hpp"
#include "mgsc/q_learning.hpp"
#include "mgsc/rng.hpp"
#include "mgsc/search_control.hpp"
#include "mgsc/transition.hpp"

namespace mgsc {

/// k planning updates: query state from the strategy, epsilon-greedy action
/// under the current table, outcome from the model, in-place Q update.
/// Returns the simulated transitions in the order they were applied.
template <PlanningModel Model, SearchControl Strategy>
std::vector<Transition> plan(QTable& q, const Model& model, const Strategy& strategy,
                             std::size_t k, double epsilon, Rng& rng) {
  std::vector<Transition> used;
  used.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const StateId s = strategy.sample_state(rng);
    const Action a = select_action(q, s, epsilon, rng);
    const ModelSample m = model.sample(s, a, rng);
    const Transition t{s, a, m.reward, m.next_state, m.terminal};
    q_update(q, t);
    used.push_back(t);
  }
  return used;
}

/// Direct update on the real transition followed by k planning updates.
template <PlanningModel Model, SearchControl Strategy>
std::vector<Transition> dyna_step(QTable& q, const Model& model, const Strategy& strategy,
                                  const Transition& real, std::size_t k, double epsilon, Rng& rng) {
  q_update(q, real);
  return plan(q, model, strategy, k, epsilon, rng);
}

}  // namespace mgsc
