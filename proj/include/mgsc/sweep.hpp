#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "mgsc/config.hpp"
#include "mgsc/experiment.hpp"
#include "mgsc/stats.hpp"

namespace mgsc {

/// Hyperparameter grid: each key maps to the values it takes, in file order.
using Grid = std::vector<std::pair<std::string, std::vector<std::string>>>;

/// Grid file: `key = v1, v2, ...` per line, '#' comments.
inline Grid parse_grid(std::string_view text, const std::string& origin = "<grid>") {
  Grid grid;
  for_each_setting(text, origin, [&](const std::string& k, const std::string& v) {
    auto values = detail::split_list(v);
    if (values.empty()) throw ConfigError("grid: key '" + k + "' has no values");
    // Check each value parses for this key.
    ExperimentConfig probe;
    for (const auto& val : values) apply_setting(probe, k, val);
    grid.emplace_back(k, std::move(values));
  });
  return grid;
}

inline Grid load_grid(const std::string& path) { return parse_grid(read_text_file(path), path); }

struct SweepEntry {
  std::vector<std::pair<std::string, std::string>> overrides;
  ExperimentConfig config;
  std::string agent;
  std::vector<double> totals;  ///< one per seed, in config.seeds order

  double mean() const {
    double s = 0.0;
    for (double t : totals) s += t;
    return totals.empty() ? 0.0 : s / static_cast<double>(totals.size());
  }
};

struct SweepResult {
  std::vector<SweepEntry> entries;
  std::map<std::string, std::size_t> best;  ///< agent -> index into entries
};

/// Cartesian product of the grid applied on top of `base`. Invalid
/// combinations (e.g. avoid-terminal on TwoRooms) are skipped.
inline std::vector<SweepEntry> expand_grid(const ExperimentConfig& base, const Grid& grid) {
  if (grid.empty()) throw ConfigError("sweep: empty grid");
  std::vector<SweepEntry> out;
  std::vector<std::size_t> idx(grid.size(), 0);
  for (;;) {
    SweepEntry e;
    e.config = base;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      apply_setting(e.config, grid[i].first, grid[i].second[idx[i]]);
      e.overrides.emplace_back(grid[i].first, grid[i].second[idx[i]]);
    }
    try {
      validate(e.config);
      e.agent = agent_label(e.config);
      out.push_back(std::move(e));
    } catch (const ConfigError&) {
    }
    std::size_t d = grid.size();
    while (d > 0) {
      --d;
      if (++idx[d] < grid[d].second.size()) break;
      idx[d] = 0;
      if (d == 0) return out;
    }
  }
}

/// Runs every grid point over every seed and picks, per agent, the
/// configuration with the highest mean total reward.
inline SweepResult run_sweep(const ExperimentConfig& base, const Grid& grid,
                             unsigned threads = std::thread::hardware_concurrency()) {
  SweepResult result;
  result.entries = expand_grid(base, grid);
  if (result.entries.empty()) throw ConfigError("sweep: no valid configuration in grid");

  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t e = 0; e < result.entries.size(); ++e) {
    result.entries[e].totals.assign(result.entries[e].config.seeds.size(), 0.0);
    for (std::size_t s = 0; s < result.entries[e].config.seeds.size(); ++s) jobs.emplace_back(e, s);
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      auto& entry = result.entries[jobs[j].first];
      try {
        entry.totals[jobs[j].second] =
            run_experiment(entry.config, entry.config.seeds[jobs[j].second]).total_reward();
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(jobs.size())));
  std::vector<std::jthread> pool;
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  pool.clear();
  if (failure) std::rethrow_exception(failure);

  for (std::size_t e = 0; e < result.entries.size(); ++e) {
    const auto& agent = result.entries[e].agent;
    auto it = result.best.find(agent);
    if (it == result.best.end() || result.entries[e].mean() > result.entries[it->second].mean())
      result.best[agent] = e;
  }
  return result;
}

}  // namespace mgsc
