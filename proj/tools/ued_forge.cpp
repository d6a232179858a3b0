// ued-forge: train, evaluate and render maze curricula.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ued/ued.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

nlohmann::json plan_json(const ued::RunConfig& c) {
  const auto plan = ued::plan_run(c);
  return {{"algorithm", ued::to_string(c.algorithm)},
          {"iterations", plan.iterations},
          {"steps_per_iteration", plan.steps_per_iteration},
          {"env_steps", plan.env_steps}};
}

nlohmann::json summary_json(const ued::Run& run) {
  const auto& t = run.tally();
  return {{"algorithm", ued::to_string(run.config().algorithm)},
          {"seed", run.seed()},
          {"env_steps", t.env_steps},
          {"updates", t.updates},
          {"dr_cycles", t.dr_cycles},
          {"replay_cycles", t.replay_cycles},
          {"mutation_cycles", t.mutation_cycles}};
}

void train_seed(const ued::RunConfig& cfg, std::uint64_t seed, const fs::path& dir, bool resume, int threads) {
  const fs::path metrics_path = dir / ued::kMetricsFile;
  std::optional<ued::Run> run;
  if (resume && fs::exists(dir / ued::kStateFile)) {
    auto loaded = ued::load_run(dir, cfg, threads);
    if (fs::exists(metrics_path)) fs::resize_file(metrics_path, loaded.metrics_bytes);
    run.emplace(std::move(loaded.run));
    std::fprintf(stderr, "seed %llu: resuming at %llu env steps\n", static_cast<unsigned long long>(seed),
                 static_cast<unsigned long long>(run->tally().env_steps));
  } else {
    fs::create_directories(dir);
    run.emplace(cfg, seed, threads);
    std::ofstream(metrics_path, std::ios::binary | std::ios::trunc);
  }
  std::ofstream(dir / "config.json", std::ios::binary) << ued::config_to_json(cfg).dump(2) << "\n";

  std::ofstream metrics(metrics_path, std::ios::binary | std::ios::app);
  const auto log_every = std::max<std::uint64_t>(1, cfg.log_interval);
  while (!run->finished()) {
    const auto rec = run->step();
    if (rec.iteration % log_every == 0 || run->finished()) {
      metrics << ued::to_json_line(rec);
      metrics.flush();
    }
    if (cfg.checkpoint_interval > 0 && rec.iteration % cfg.checkpoint_interval == 0 && !run->finished())
      ued::save_run(dir, *run, static_cast<std::uint64_t>(fs::file_size(metrics_path)));
  }
  metrics.close();
  ued::save_run(dir, *run, static_cast<std::uint64_t>(fs::file_size(metrics_path)));
  std::ofstream(dir / "summary.json", std::ios::binary) << summary_json(*run).dump(2) << "\n";
  std::fprintf(stderr, "seed %llu: done, %llu env steps -> %s\n", static_cast<unsigned long long>(seed),
               static_cast<unsigned long long>(run->tally().env_steps), dir.string().c_str());
}

int cmd_train(const std::string& config_path, std::optional<std::uint64_t> seed, const std::string& out, bool resume,
              bool dry_run) {
  ued::RunConfig cfg;
  try {
    cfg = ued::load_config(config_path);
  } catch (const ued::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  }
  if (seed) cfg.seeds = {*seed};
  if (!out.empty()) cfg.out_dir = out;
  if (dry_run) {
    std::cout << plan_json(cfg).dump(2) << "\n";
    return 0;
  }
  const int threads = ued::threads_from_env();
  for (auto s : cfg.seeds) train_seed(cfg, s, fs::path(cfg.out_dir) / ("seed_" + std::to_string(s)), resume, threads);
  return 0;
}

int cmd_eval(const std::string& ckpt, const std::vector<std::string>& level_files, int episodes, bool sample,
             std::uint64_t seed, int max_steps) {
  std::vector<ued::maze::MazeLevel> levels;
  auto files = nlohmann::json::array();
  for (const auto& f : level_files) {
    auto parsed = ued::maze::parse_levels(read_file(f));
    files.push_back({{"path", f}, {"first_index", levels.size()}, {"count", parsed.size()}});
    levels.insert(levels.end(), parsed.begin(), parsed.end());
  }
  ued::maze::MazeParams params;
  params.max_steps = max_steps;
  const ued::maze::MazeEnv env(params);
  const auto key = ued::make_key(seed);
  const int threads = ued::threads_from_env();
  ued::EvalReport report;
  if (ckpt == "oracle") {
    report = ued::evaluate(ued::OraclePolicy{}, env, std::span(levels), episodes, key, threads);
  } else {
    const ued::NetworkPolicy policy(ued::load_checkpoint(ckpt), env,
                                    sample ? ued::ActionMode::sample : ued::ActionMode::greedy);
    report = ued::evaluate(policy, env, std::span(levels), episodes, key, threads);
  }
  auto j = ued::to_json(report);
  j["files"] = files;
  j["policy"] = ckpt;
  j["mode"] = sample ? "sample" : "greedy";
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_render(const std::string& level_file, const std::string& out, int cell_px) {
  const auto levels = ued::maze::parse_levels(read_file(level_file));
  fs::create_directories(out);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "level_%03zu.ppm", i);
    std::ofstream os(fs::path(out) / name, std::ios::binary);
    if (!os) throw std::runtime_error(std::string("cannot write ") + name);
    ued::maze::write_ppm(os, ued::maze::render_level(levels[i], cell_px));
  }
  std::fprintf(stderr, "wrote %zu image(s) to %s\n", levels.size(), out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curriculum training on procedurally generated mazes"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::uint64_t seed_value = 0;
  bool resume = false, dry_run = false;
  auto* train = app.add_subcommand("train", "Train one or more seeds from a JSON config");
  train->add_option("--config", config_path, "Run configuration (JSON)")->required();
  auto* seed_opt = train->add_option("--seed", seed_value, "Train only this seed");
  train->add_option("--out", out_dir, "Output directory (overrides out_dir)");
  train->add_flag("--resume", resume, "Continue from the run state in the output directory");
  train->add_flag("--dry-run", dry_run, "Print the step plan without training");

  std::string ckpt;
  std::vector<std::string> level_files;
  int episodes = 10, max_steps = 250;
  bool sample = false;
  std::uint64_t eval_seed = 0;
  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint on level files");
  eval->add_option("--ckpt", ckpt, "Checkpoint path, or 'oracle' for the shortest-path policy")->required();
  eval->add_option("--levels", level_files, "Level files")->required();
  eval->add_option("--episodes", episodes, "Episodes per level")->check(CLI::PositiveNumber);
  eval->add_flag("--sample", sample, "Sample actions instead of taking the argmax");
  eval->add_option("--seed", eval_seed, "Evaluation seed");
  eval->add_option("--max-steps", max_steps, "Episode step limit")->check(CLI::PositiveNumber);

  std::string render_file, render_out;
  int cell_px = 16;
  auto* render = app.add_subcommand("render", "Render levels to PPM images");
  render->add_option("--levels", render_file, "Level file")->required();
  render->add_option("--out", render_out, "Output directory")->required();
  render->add_option("--cell-px", cell_px, "Pixels per grid cell")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train)
      return cmd_train(config_path, *seed_opt ? std::optional<std::uint64_t>(seed_value) : std::nullopt, out_dir,
                       resume, dry_run);
    if (*eval) return cmd_eval(ckpt, level_files, episodes, sample, eval_seed, max_steps);
    if (*render) return cmd_render(render_file, render_out, cell_px);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
