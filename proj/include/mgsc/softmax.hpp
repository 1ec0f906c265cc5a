#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace mgsc {

/// Max-shifted softmax. Output is strictly positive whenever the logit spread
/// stays within double range.
inline std::vector<double> softmax_probs(std::span<const double> logits) {
  std::vector<double> p(logits.size());
  if (logits.empty()) return p;
  const double shift = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - shift);
    z += p[i];
  }
  for (double& v : p) v /= z;
  return p;
}

}  // namespace mgsc
