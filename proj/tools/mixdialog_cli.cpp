// Training and evaluation front end: train, evaluate, compare.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "mixdialog/harness.hpp"

using namespace mixdialog;

namespace {

struct CommonArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string data;
};

ExperimentConfig resolve(const CommonArgs& args) {
  ExperimentConfig c = args.config.empty() ? ExperimentConfig{} : ExperimentConfig::load(args.config);
  if (args.seed) {
    c.seed = *args.seed;
    c.evaluation_seed = mix_seed(*args.seed, 1);
  }
  if (!args.out.empty()) c.output_dir = args.out;
  if (!args.data.empty()) c.data_dir = args.data;
  c.validate();
  return c;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("-c,--config", args.config, "Experiment config (JSON)")->check(CLI::ExistingFile);
  cmd->add_option("-s,--seed", args.seed, "Override the training seed (also derives the evaluation seed)");
  cmd->add_option("-o,--out", args.out, "Output directory");
  cmd->add_option("--data", args.data, "Data directory");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Train, evaluate and compare mixed task/social dialog policies"};
  app.require_subcommand(1);

  CommonArgs train_args, eval_args, compare_args;
  std::string train_variant;
  std::size_t progress_every = 0;
  auto* train_cmd = app.add_subcommand("train", "Train one variant and save its Q-table");
  add_common(train_cmd, train_args);
  train_cmd->add_option("-v,--variant", train_variant, "TaskGlobal, MixLocal or MixGlobal");
  train_cmd->add_option("--progress", progress_every, "Print a progress line every N episodes");

  std::string model_path, eval_variant;
  std::optional<std::size_t> eval_episodes;
  auto* eval_cmd = app.add_subcommand("evaluate", "Evaluate a saved Q-table greedily");
  add_common(eval_cmd, eval_args);
  eval_cmd->add_option("-m,--model", model_path, "Q-table file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("-n,--episodes", eval_episodes, "Evaluation episodes");

  auto* compare_cmd = app.add_subcommand("compare", "Train and evaluate all three variants");
  add_common(compare_cmd, compare_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train_cmd) {
      ExperimentConfig c = resolve(train_args);
      if (!train_variant.empty()) c.variant = parse_variant(train_variant);
      const Resources res = Resources::load(c.data_dir);
      const auto t0 = std::chrono::steady_clock::now();
      double window_max = 0.0;
      const TrainingResult r = train(res, c, [&](std::size_t ep, const EpisodeResult& e) {
        window_max = std::max(window_max, e.max_q_change);
        if (progress_every && (ep + 1) % progress_every == 0) {
          std::cout << "episode " << ep + 1 << " max|dQ| " << window_max << " states " << "\n";
          window_max = 0.0;
        }
      });
      std::filesystem::create_directories(c.output_dir);
      const auto path = c.output_dir / (std::string(to_string(c.variant)) + ".qtable.json");
      r.table.save(path, c.variant);
      std::cout << to_string(c.variant) << ": " << (r.converged ? "converged after " : "budget exhausted after ")
                << r.episodes << " episodes (" << r.conversations_including_restarts
                << " conversations including restarts), " << r.table.state_count() << " states, "
                << seconds_since(t0) << " s\nsaved " << path.string() << "\n";
      return r.converged ? 0 : 3;
    }
    if (*eval_cmd) {
      ExperimentConfig c = resolve(eval_args);
      const QTable table = QTable::load(model_path, &c.variant);
      const Resources res = Resources::load(c.data_dir);
      EvaluationReport report;
      report.rows.push_back(evaluate(res, table, c, eval_episodes.value_or(c.evaluation_episodes)));
      std::filesystem::create_directories(c.output_dir);
      const auto csv = c.output_dir / ("evaluate_" + std::string(to_string(c.variant)) + ".csv");
      std::ofstream(csv, std::ios::binary) << to_csv(report);
      std::cout << to_table(report);
      return 0;
    }
    if (*compare_cmd) {
      const ExperimentConfig c = resolve(compare_args);
      const Resources res = Resources::load(c.data_dir);
      const auto t0 = std::chrono::steady_clock::now();
      const EvaluationReport report = compare(res, c);
      std::cout << to_table(report) << "wrote " << (c.output_dir / "compare.csv").string() << " in "
                << seconds_since(t0) << " s\n";
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const UnknownVariant& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
