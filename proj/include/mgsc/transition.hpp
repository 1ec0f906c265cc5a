#pragma once

#include "mgsc/grid.hpp"

namespace mgsc {

/// One (s, a, r, s') tuple, from the environment or from a model.
struct Transition {
  StateId s = 0;
  Action a = Action::Up;
  double r = 0.0;
  StateId s_next = 0;
  bool terminal = false;

  friend bool operator==(const Transition&, const Transition&) = default;
};

}  // namespace mgsc
