#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mixdialog/engine.hpp"
#include "mixdialog/episode.hpp"
#include "mixdialog/policy.hpp"
#include "mixdialog/q_table.hpp"
#include "mixdialog/simulator.hpp"

namespace mixdialog {

/// Per-episode quantity the convergence window watches.
enum class ConvergenceStatistic : std::uint8_t {
  WindowMean,  // mean over the window of each episode's mean |dQ|
  WindowMax,   // every episode's largest |dQ| in the window
};

std::string_view to_string(ConvergenceStatistic s) noexcept;
/// Throws ConfigError.
ConvergenceStatistic parse_convergence_statistic(std::string_view name);

struct ConvergenceCriterion {
  std::size_t window = 100;
  double threshold = 0.01;
  ConvergenceStatistic statistic = ConvergenceStatistic::WindowMean;
};

/// Sliding-window convergence test fed one episode at a time.
class ConvergenceMonitor {
 public:
  explicit ConvergenceMonitor(ConvergenceCriterion criterion) : criterion_(criterion) {}

  /// Records an episode; true once the criterion holds.
  bool observe(const EpisodeResult& episode);
  bool observe(double max_change, double mean_change);

 private:
  ConvergenceCriterion criterion_;
  std::size_t quiet_ = 0;
  std::deque<double> window_;
  double window_sum_ = 0.0;
};

struct ExperimentConfig {
  Variant variant = Variant::MixGlobal;
  std::size_t episode_budget = 60000;
  ConvergenceCriterion convergence;
  std::uint64_t seed = 1;
  std::uint64_t evaluation_seed = 2;
  std::size_t evaluation_episodes = 500;
  PolicyConfig policy;
  PersonaMarginals personas;
  std::filesystem::path data_dir = MIXDIALOG_DATA_DIR;
  std::filesystem::path output_dir = "out";

  /// Throws ConfigError.
  void validate() const;

  nlohmann::json to_json() const;
  /// Missing keys keep their defaults; unknown keys are rejected. Throws
  /// ConfigError (UnknownVariant for a bad variant name).
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::filesystem::path& path);
};

struct TrainingResult {
  QTable table;
  bool converged = false;
  std::size_t episodes = 0;                  // completed episodes run
  std::size_t episodes_to_convergence = 0;   // == episodes when converged
  std::size_t conversations_including_restarts = 0;
  std::size_t restarts = 0;
};

/// Called after every training episode with its 0-based index.
using EpisodeObserver = std::function<void(std::size_t, const EpisodeResult&)>;

/// Trains until the convergence statistic over the last `window` episodes
/// drops below `threshold`, or the budget runs out (`converged` false).
/// WindowMax never fires while rarely visited pairs still take large
/// steps, which is why WindowMean is the default.
TrainingResult train(const Resources& resources, const ExperimentConfig& config,
                     const EpisodeObserver& observer = {});

struct EvaluationRow {
  Variant variant = Variant::MixGlobal;
  std::size_t episodes = 0;
  double app_rate = 0.0;         // % of system responses rated 2
  double deep_rate = 0.0;        // % of conversations that were deep; not reported for TaskGlobal
  double mean_info_gain = 0.0;
  double mean_conv_len = 0.0;
  double task_success_rate = 0.0;  // %
  double repeat_pair_rate = 0.0;   // % of adjacent system turns sharing a strategy
  int max_task_responses = 0;      // most task-template turns in one conversation
  std::size_t restarts = 0;
  std::size_t episodes_to_convergence = 0;
  std::size_t conversations_to_convergence = 0;
  bool converged = false;

  bool depth_applicable() const noexcept { return uses_nontask(variant); }
};

struct EvaluationReport {
  std::vector<EvaluationRow> rows;
};

/// Greedy (epsilon 0) episodes over personas drawn from `evaluation_seed`,
/// so every variant meets the same users. Throws ValidationError when
/// `n_episodes` is 0. Convergence fields are left for the caller.
EvaluationRow evaluate(const Resources& resources, const QTable& table, const ExperimentConfig& config,
                       std::size_t n_episodes, std::vector<Conversation>* transcripts = nullptr);

std::string to_csv(const EvaluationReport& report);
std::string to_table(const EvaluationReport& report);

/// Trains and evaluates every variant with the same seeds, writing
/// compare.csv, compare.txt and one <variant>.qtable.json per variant to
/// `config.output_dir`.
EvaluationReport compare(const Resources& resources, const ExperimentConfig& config);

}  // namespace mixdialog
