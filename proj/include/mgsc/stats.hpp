#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mgsc {

struct Aggregate {
  double mean = 0.0;
  double half_width = 0.0;  ///< 95% normal-approximation: 1.96 * s / sqrt(n)

  double lo() const { return mean - half_width; }
  double hi() const { return mean + half_width; }
};

inline Aggregate aggregate(std::span<const double> values) {
  if (values.size() < 2) throw std::invalid_argument("aggregate: need at least two values");
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  return {mean, 1.96 * sd / std::sqrt(n)};
}

inline bool intervals_overlap(const Aggregate& a, const Aggregate& b) {
  return a.lo() <= b.hi() && b.lo() <= a.hi();
}

struct CurvePoint {
  std::uint64_t step;
  double mean_reward;
};

/// Mean reward over consecutive windows, one point at the end of each full
/// window. A trailing partial window is dropped.
inline std::vector<CurvePoint> average_reward_curve(std::span<const double> rewards,
                                                    std::uint64_t window) {
  if (window == 0) throw std::invalid_argument("average_reward_curve: window must be >= 1");
  std::vector<CurvePoint> out;
  double acc = 0.0;
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    acc += rewards[i];
    if ((i + 1) % window == 0) {
      out.push_back({i + 1, acc / static_cast<double>(window)});
      acc = 0.0;
    }
  }
  return out;
}

}  // namespace mgsc
