#pragma once

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "mgsc/experiment.hpp"
#include "mgsc/stats.hpp"

namespace mgsc {

struct OutputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw OutputError("cannot write '" + path.string() + "'");
  return out;
}

inline void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw OutputError("write failed for '" + path.string() + "'");
}

inline void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw OutputError("cannot create directory '" + dir.string() + "'");
}

}  // namespace detail

inline void write_metrics_csv(const MetricsLog& log, const std::filesystem::path& path) {
  auto out = detail::open_out(path);
  out << "step,episode,reward,cumulative_reward\n";
  double cumulative = 0.0;
  for (std::size_t i = 0; i < log.rewards.size(); ++i) {
    cumulative += log.rewards[i];
    out << (i + 1) << ',' << log.episodes[i] << ',' << format_real(log.rewards[i]) << ','
        << format_real(cumulative) << '\n';
  }
  detail::finish(out, path);
}

inline void write_snapshots_csv(const MetricsLog& log, const std::filesystem::path& path) {
  auto out = detail::open_out(path);
  out << "fraction,state_id,row,col,probability\n";
  for (const Snapshot& snap : log.snapshots) {
    for (std::size_t i = 0; i < snap.states.size(); ++i) {
      const Cell& cell = log.spec.cell(snap.states[i]);
      out << format_real(snap.fraction) << ',' << snap.states[i] << ',' << cell.row << ','
          << cell.col << ',' << format_real(snap.probabilities[i]) << '\n';
    }
  }
  detail::finish(out, path);
}

inline nlohmann::ordered_json summary_json(const MetricsLog& log) {
  nlohmann::ordered_json j;
  j["seed"] = log.seed;
  j["agent"] = agent_label(log.config);
  j["total_reward"] = log.total_reward();
  j["steps"] = log.rewards.size();
  j["episodes_completed"] = log.episodes_completed;
  j["truncated_episodes"] = log.truncated_episodes;
  nlohmann::ordered_json avg;
  avg["kind"] = "windowed-mean";
  avg["window"] = log.config.avg_window;
  avg["points"] = nlohmann::ordered_json::array();
  for (const auto& p : average_reward_curve(log.rewards, log.config.avg_window))
    avg["points"].push_back({p.step, p.mean_reward});
  j["average_reward"] = std::move(avg);
  nlohmann::ordered_json cfg;
  for (const auto& [k, v] : config_entries(log.config)) cfg[k] = v;
  j["config"] = std::move(cfg);
  return j;
}

inline void write_summary_json(const MetricsLog& log, const std::filesystem::path& path) {
  auto out = detail::open_out(path);
  out << summary_json(log).dump(2) << '\n';
  detail::finish(out, path);
}

/// metrics.csv, snapshots.csv and summary.json under `dir`.
inline void emit_outputs(const MetricsLog& log, const std::filesystem::path& dir) {
  detail::ensure_dir(dir);
  write_metrics_csv(log, dir / "metrics.csv");
  write_snapshots_csv(log, dir / "snapshots.csv");
  write_summary_json(log, dir / "summary.json");
}

inline void write_q_csv(const QTable& q, const std::filesystem::path& path) {
  auto out = detail::open_out(path);
  out << "state,action,value\n";
  for (StateId s = 0; s < q.num_states(); ++s)
    for (Action a : kActions)
      out << s << ',' << to_string(a) << ',' << format_real(q(s, a)) << '\n';
  detail::finish(out, path);
}

inline void write_model_csv(const RewardCountModel& m, const std::filesystem::path& path) {
  auto out = detail::open_out(path);
  out << "state,action,reward,count\n";
  for (const auto& row : m.rows())
    out << row.state << ',' << to_string(row.action) << ',' << format_real(row.reward) << ','
        << row.count << '\n';
  detail::finish(out, path);
}

}  // namespace mgsc
