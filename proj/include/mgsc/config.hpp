#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mgsc {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class EnvKind { TMaze, TwoRooms };
enum class ModelKind { None, FixedTMaze, LearnedCounts };
enum class StrategyKind { None, Uniform, AvoidTerminal, Mgsc };

/// Everything needed to reproduce one agent's run.
struct ExperimentConfig {
  EnvKind environment = EnvKind::TMaze;
  ModelKind model = ModelKind::None;
  StrategyKind strategy = StrategyKind::None;
  std::uint64_t total_steps = 100'000;
  std::uint64_t planning_steps = 5;
  double step_size = 0.1;
  double meta_step_size = 5e-3;
  double epsilon = 0.1;
  double epsilon_env = 0.1;
  double gamma = 0.9;
  std::uint64_t swap_period = 600;
  std::uint64_t step_cap = 10'000;
  std::uint64_t avg_window = 5'000;
  bool meta_uses_pre_planning_theta = false;
  std::vector<std::uint64_t> seeds{0};
  std::vector<double> snapshot_fractions{0.25, 0.5, 0.75, 1.0};
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto piece = trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start));
    if (!piece.empty()) out.push_back(piece);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::uint64_t parse_uint(const std::string& key, std::string_view v) {
  std::uint64_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw ConfigError("config: '" + key + "' expects a non-negative integer, got '" +
                      std::string(v) + "'");
  return out;
}

inline double parse_real(const std::string& key, std::string_view v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw ConfigError("config: '" + key + "' expects a real number, got '" + std::string(v) + "'");
  return out;
}

inline bool parse_bool(const std::string& key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config: '" + key + "' expects true/false, got '" + std::string(v) + "'");
}

}  // namespace detail

inline std::string to_string(EnvKind k) { return k == EnvKind::TMaze ? "tmaze" : "tworooms"; }

inline std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::None: return "none";
    case ModelKind::FixedTMaze: return "fixed-tmaze";
    case ModelKind::LearnedCounts: return "learned-counts";
  }
  return "?";
}

inline std::string to_string(StrategyKind k) {
  switch (k) {
    case StrategyKind::None: return "none";
    case StrategyKind::Uniform: return "uniform";
    case StrategyKind::AvoidTerminal: return "avoid-terminal";
    case StrategyKind::Mgsc: return "mgsc";
  }
  return "?";
}

/// Agent name used in sweeps and reports.
inline std::string agent_label(const ExperimentConfig& c) {
  return c.strategy == StrategyKind::None ? "q-learning" : to_string(c.strategy);
}

/// Sets one key. Keys use the same spelling in files and in --set overrides.
inline void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& raw) {
  using namespace detail;
  const std::string v = trim(raw);
  if (key == "environment") {
    if (v == "tmaze") c.environment = EnvKind::TMaze;
    else if (v == "tworooms") c.environment = EnvKind::TwoRooms;
    else throw ConfigError("config: unknown environment '" + v + "'");
  } else if (key == "model") {
    if (v == "none") c.model = ModelKind::None;
    else if (v == "fixed-tmaze") c.model = ModelKind::FixedTMaze;
    else if (v == "learned-counts") c.model = ModelKind::LearnedCounts;
    else throw ConfigError("config: unknown model '" + v + "'");
  } else if (key == "strategy") {
    if (v == "none") c.strategy = StrategyKind::None;
    else if (v == "uniform") c.strategy = StrategyKind::Uniform;
    else if (v == "avoid-terminal") c.strategy = StrategyKind::AvoidTerminal;
    else if (v == "mgsc") c.strategy = StrategyKind::Mgsc;
    else throw ConfigError("config: unknown strategy '" + v + "'");
  } else if (key == "total-steps") {
    c.total_steps = parse_uint(key, v);
  } else if (key == "planning-steps") {
    c.planning_steps = parse_uint(key, v);
  } else if (key == "step-size") {
    c.step_size = parse_real(key, v);
  } else if (key == "meta-step-size") {
    c.meta_step_size = parse_real(key, v);
  } else if (key == "epsilon") {
    c.epsilon = parse_real(key, v);
  } else if (key == "epsilon-env") {
    c.epsilon_env = parse_real(key, v);
  } else if (key == "gamma") {
    c.gamma = parse_real(key, v);
  } else if (key == "swap-period") {
    c.swap_period = parse_uint(key, v);
  } else if (key == "step-cap") {
    c.step_cap = parse_uint(key, v);
  } else if (key == "avg-window") {
    c.avg_window = parse_uint(key, v);
  } else if (key == "meta-uses-pre-planning-theta") {
    c.meta_uses_pre_planning_theta = parse_bool(key, v);
  } else if (key == "seeds") {
    // Comma list; "a..b" expands to the inclusive range.
    c.seeds.clear();
    for (const auto& item : split_list(v)) {
      const auto dots = item.find("..");
      if (dots == std::string::npos) {
        c.seeds.push_back(parse_uint(key, item));
      } else {
        const auto lo = parse_uint(key, trim(item.substr(0, dots)));
        const auto hi = parse_uint(key, trim(item.substr(dots + 2)));
        if (hi < lo) throw ConfigError("config: empty seed range '" + item + "'");
        for (auto s = lo; s <= hi; ++s) c.seeds.push_back(s);
      }
    }
  } else if (key == "snapshot-fractions") {
    c.snapshot_fractions.clear();
    for (const auto& item : split_list(v)) c.snapshot_fractions.push_back(parse_real(key, item));
  } else {
    throw ConfigError("config: unknown key '" + key + "'");
  }
}

/// "key=value" (as passed to --set).
inline void apply_override(ExperimentConfig& c, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos)
    throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
  apply_setting(c, detail::trim(assignment.substr(0, eq)),
                std::string(assignment.substr(eq + 1)));
}

/// Walks `key = value` lines, skipping blanks and '#' comments.
template <typename Fn>
void for_each_setting(std::string_view text, const std::string& origin, Fn&& fn) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    try {
      fn(detail::trim(std::string_view(t).substr(0, eq)), t.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

/// Shortest decimal that round-trips to the same double.
inline std::string format_real(double x) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc{}) throw std::runtime_error("format_real: conversion failed");
  return std::string(buf.data(), end);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline ExperimentConfig parse_config(std::string_view text, const std::string& origin = "<config>",
                                     ExperimentConfig base = {}) {
  for_each_setting(text, origin,
                   [&](const std::string& k, const std::string& v) { apply_setting(base, k, v); });
  return base;
}

inline ExperimentConfig load_config(const std::string& path) {
  return parse_config(read_text_file(path), path);
}

/// Throws ConfigError describing the first problem found.
inline void validate(const ExperimentConfig& c) {
  if ((c.model == ModelKind::None) != (c.strategy == StrategyKind::None))
    throw ConfigError("config: model and strategy must both be 'none' or both be set");
  if (c.model == ModelKind::FixedTMaze && c.environment != EnvKind::TMaze)
    throw ConfigError("config: fixed-tmaze model requires environment = tmaze");
  if (c.strategy == StrategyKind::AvoidTerminal && c.environment != EnvKind::TMaze)
    throw ConfigError("config: avoid-terminal strategy requires environment = tmaze");
  if (c.total_steps == 0) throw ConfigError("config: total-steps must be positive");
  if (!(c.step_size >= 0.0)) throw ConfigError("config: step-size must be >= 0");
  if (!(c.meta_step_size >= 0.0)) throw ConfigError("config: meta-step-size must be >= 0");
  if (!(c.epsilon >= 0.0 && c.epsilon <= 1.0)) throw ConfigError("config: epsilon outside [0,1]");
  if (!(c.epsilon_env >= 0.0 && c.epsilon_env <= 1.0))
    throw ConfigError("config: epsilon-env outside [0,1]");
  if (!(c.gamma >= 0.0 && c.gamma < 1.0)) throw ConfigError("config: gamma outside [0,1)");
  if (c.swap_period == 0) throw ConfigError("config: swap-period must be positive");
  if (c.step_cap == 0) throw ConfigError("config: step-cap must be positive");
  if (c.avg_window == 0) throw ConfigError("config: avg-window must be positive");
  if (c.seeds.empty()) throw ConfigError("config: seeds must not be empty");
  double prev = 0.0;
  for (double f : c.snapshot_fractions) {
    if (!(f > 0.0 && f <= 1.0)) throw ConfigError("config: snapshot fraction outside (0,1]");
    if (f < prev) throw ConfigError("config: snapshot-fractions must be sorted");
    prev = f;
  }
}

/// Ordered key/value echo of a configuration, in the file syntax.
inline std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& c) {
  auto real = [](double x) { return format_real(x); };
  auto join = [](const auto& xs, auto fmt) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + fmt(xs[i]);
    return out;
  };
  return {
      {"environment", to_string(c.environment)},
      {"model", to_string(c.model)},
      {"strategy", to_string(c.strategy)},
      {"total-steps", std::to_string(c.total_steps)},
      {"planning-steps", std::to_string(c.planning_steps)},
      {"step-size", real(c.step_size)},
      {"meta-step-size", real(c.meta_step_size)},
      {"epsilon", real(c.epsilon)},
      {"epsilon-env", real(c.epsilon_env)},
      {"gamma", real(c.gamma)},
      {"swap-period", std::to_string(c.swap_period)},
      {"step-cap", std::to_string(c.step_cap)},
      {"avg-window", std::to_string(c.avg_window)},
      {"meta-uses-pre-planning-theta", c.meta_uses_pre_planning_theta ? "true" : "false"},
      {"seeds", join(c.seeds, [](std::uint64_t s) { return std::to_string(s); })},
      {"snapshot-fractions", join(c.snapshot_fractions, real)},
  };
}

}  // namespace mgsc
