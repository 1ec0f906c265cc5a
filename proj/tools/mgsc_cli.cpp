// Command-line front end: run, sweep, dump-model, dump-q, ascii-map.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mgsc/mgsc.hpp"

namespace fs = std::filesystem;

namespace {

struct RunArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
};

void add_run_args(CLI::App* cmd, RunArgs& args) {
  cmd->add_option("--config", args.config_path, "experiment config file")->required();
  cmd->add_option("--seed", args.seed, "run only this seed");
  cmd->add_option("--set", args.overrides, "override a config key (key=value)");
}

mgsc::ExperimentConfig resolve(const RunArgs& args) {
  auto cfg = mgsc::load_config(args.config_path);
  for (const auto& o : args.overrides) mgsc::apply_override(cfg, o);
  if (args.seed) cfg.seeds = {*args.seed};
  mgsc::validate(cfg);
  return cfg;
}

int cmd_run(const RunArgs& args, const std::string& out_dir) {
  const auto cfg = resolve(args);
  std::vector<double> totals;
  for (std::uint64_t seed : cfg.seeds) {
    const auto log = mgsc::run_experiment(cfg, seed);
    totals.push_back(log.total_reward());
    if (!out_dir.empty()) {
      const fs::path dir =
          cfg.seeds.size() == 1 ? fs::path(out_dir) : fs::path(out_dir) / ("seed-" + std::to_string(seed));
      mgsc::emit_outputs(log, dir);
    }
    std::cout << mgsc::agent_label(cfg) << " seed " << seed
              << " total_reward " << mgsc::format_real(log.total_reward()) << '\n';
  }
  if (totals.size() >= 2) {
    const auto agg = mgsc::aggregate(totals);
    std::cout << mgsc::agent_label(cfg) << " mean " << mgsc::format_real(agg.mean) << " ci95 +/- "
              << mgsc::format_real(agg.half_width) << '\n';
  }
  return 0;
}

int cmd_sweep(const RunArgs& args, const std::string& grid_path, const std::string& out_dir,
              unsigned threads) {
  const auto cfg = resolve(args);
  const auto grid = mgsc::load_grid(grid_path);
  const auto result = mgsc::run_sweep(cfg, grid, threads);

  fs::create_directories(out_dir);
  const fs::path csv_path = fs::path(out_dir) / "sweep.csv";
  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) throw mgsc::OutputError("cannot write '" + csv_path.string() + "'");
  csv << "config_id,agent";
  for (const auto& [k, v] : grid) csv << ',' << k;
  csv << ",seed,total_reward\n";
  nlohmann::ordered_json best = nlohmann::ordered_json::object();
  for (std::size_t e = 0; e < result.entries.size(); ++e) {
    const auto& entry = result.entries[e];
    for (std::size_t s = 0; s < entry.totals.size(); ++s) {
      csv << e << ',' << entry.agent;
      for (const auto& [k, v] : entry.overrides) csv << ',' << v;
      csv << ',' << entry.config.seeds[s] << ',' << mgsc::format_real(entry.totals[s]) << '\n';
    }
  }
  for (const auto& [agent, idx] : result.best) {
    const auto& entry = result.entries[idx];
    nlohmann::ordered_json j;
    j["config_id"] = idx;
    for (const auto& [k, v] : entry.overrides) j["overrides"][k] = v;
    j["mean_total_reward"] = entry.mean();
    if (entry.totals.size() >= 2) j["ci95_half_width"] = mgsc::aggregate(entry.totals).half_width;
    j["totals"] = entry.totals;
    best[agent] = std::move(j);
    std::cout << agent << " best config " << idx << " mean " << mgsc::format_real(entry.mean()) << '\n';
  }
  std::ofstream(fs::path(out_dir) / "best.json", std::ios::binary) << best.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dyna planning with meta-learned search control"};
  app.require_subcommand(1);

  RunArgs run_args;
  std::string run_out;
  auto* run = app.add_subcommand("run", "run one configuration over its seeds");
  add_run_args(run, run_args);
  run->add_option("--out", run_out, "output directory");

  RunArgs sweep_args;
  std::string grid_path, sweep_out;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  auto* sweep = app.add_subcommand("sweep", "grid search over hyperparameters");
  add_run_args(sweep, sweep_args);
  sweep->add_option("--grid", grid_path, "grid file")->required();
  sweep->add_option("--out", sweep_out, "output directory")->required();
  sweep->add_option("--threads", threads, "worker threads");

  RunArgs model_args;
  std::string model_out;
  auto* dump_model = app.add_subcommand("dump-model", "run, then write the learned reward counts");
  add_run_args(dump_model, model_args);
  dump_model->add_option("--out", model_out, "CSV path (default: stdout)");

  RunArgs q_args;
  std::string q_out;
  auto* dump_q = app.add_subcommand("dump-q", "run, then write the final Q-table");
  add_run_args(dump_q, q_args);
  dump_q->add_option("--out", q_out, "CSV path (default: stdout)");

  std::string map_env = "tmaze";
  auto* ascii = app.add_subcommand("ascii-map", "print an environment layout");
  ascii->add_option("--env", map_env, "tmaze or tworooms")
      ->check(CLI::IsMember({"tmaze", "tworooms"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_args, run_out);
    if (*sweep) return cmd_sweep(sweep_args, grid_path, sweep_out, threads);
    if (*dump_model || *dump_q) {
      const RunArgs& args = *dump_model ? model_args : q_args;
      const std::string& out = *dump_model ? model_out : q_out;
      const auto cfg = resolve(args);
      if (*dump_model && cfg.model != mgsc::ModelKind::LearnedCounts)
        throw mgsc::ConfigError("dump-model requires model = learned-counts");
      const auto log = mgsc::run_experiment(cfg, cfg.seeds.front());
      const fs::path path = out.empty() ? fs::path("/dev/stdout") : fs::path(out);
      if (*dump_model) mgsc::write_model_csv(*log.learned_model, path);
      else mgsc::write_q_csv(log.q, path);
      return 0;
    }
    if (*ascii) {
      const auto grid = map_env == "tmaze" ? mgsc::make_tmaze() : mgsc::make_tworooms();
      std::cout << mgsc::render_ascii(grid);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
