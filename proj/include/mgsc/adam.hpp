#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace mgsc {

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t t = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double step_size = 1e-3;

  AdamState() = default;
  AdamState(std::size_t dim, double step_size_)
      : m(dim, 0.0), v(dim, 0.0), step_size(step_size_) {}
};

/// One bias-corrected Adam step, descending `gradient`.
inline void adam_step(AdamState& adam, std::span<double> params, std::span<const double> gradient) {
  if (params.size() != gradient.size() || adam.m.size() != params.size() ||
      adam.v.size() != params.size())
    throw std::invalid_argument("adam_step: dimension mismatch");
  ++adam.t;
  const double c1 = 1.0 - std::pow(adam.beta1, static_cast<double>(adam.t));
  const double c2 = 1.0 - std::pow(adam.beta2, static_cast<double>(adam.t));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = gradient[i];
    adam.m[i] = adam.beta1 * adam.m[i] + (1.0 - adam.beta1) * g;
    adam.v[i] = adam.beta2 * adam.v[i] + (1.0 - adam.beta2) * g * g;
    const double m_hat = adam.m[i] / c1;
    const double v_hat = adam.v[i] / c2;
    params[i] -= adam.step_size * m_hat / (std::sqrt(v_hat) + adam.epsilon);
  }
}

}  // namespace mgsc
