#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "mixdialog/engine.hpp"
#include "mixdialog/q_table.hpp"
#include "mixdialog/simulator.hpp"

namespace mixdialog {

/// Visit counts for per-pair step-size decay during training.
class VisitCounts {
 public:
  std::uint32_t get(const DialogState& s, StrategyId a) const;
  std::uint32_t bump(const DialogState& s, StrategyId a);

 private:
  std::unordered_map<std::uint64_t, std::array<std::uint32_t, kStrategyCount>> counts_;
};

struct EpisodeOptions {
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  std::string conversation_id = "episode";
  int max_restarts = 50;
};

struct EpisodeResult {
  Conversation conversation;
  TaskProgress progress;
  RewardVector reward;  // episode-end metrics; `app` is the final system turn's level
  std::vector<int> app_scores;  // one per system turn after the opener
  int restarts = 0;
  std::size_t updates = 0;
  double max_q_change = 0.0;
  double sum_q_change = 0.0;
};

/// One simulated training conversation. Transitions are buffered and applied
/// to `q` in order once the episode completes, the final transition carrying
/// the episode-end reward. `visits` (optional) drives step-size decay. If the
/// simulator repeats an earlier reply the attempt is discarded (no updates)
/// and restarted. Throws SimulatorFailure after `max_restarts` restarts.
EpisodeResult run_episode(const DialogEngine& engine, QTable& q, VisitCounts* visits, UserSimulator& simulator,
                          const PolicyConfig& config, const EpisodeOptions& options);

/// Greedy, non-learning episode.
EpisodeResult run_greedy_episode(const DialogEngine& engine, const QTable& q, UserSimulator& simulator,
                                 const PolicyConfig& config, const EpisodeOptions& options);

}  // namespace mixdialog
