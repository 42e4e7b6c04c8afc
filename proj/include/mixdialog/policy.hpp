#pragma once

#include <optional>
#include <random>
#include <span>
#include <vector>

#include "mixdialog/candidate.hpp"
#include "mixdialog/dialog_state.hpp"
#include "mixdialog/q_table.hpp"
#include "mixdialog/reward.hpp"

namespace mixdialog {

enum class ConstraintMode : std::uint8_t { Penalty, Mask };

struct ConstraintPenalties {
  double repeat_last = 5.0;       // R1: action equals the previous strategy
  double overused_nontask = 3.0;  // R2: non-task action already used twice
  double out_of_order = 10.0;     // R3: task template offered outside its gating order
};

/// Exponential decay from `start` to `end` over the first `decay_fraction`
/// of the episode budget, then flat at `end`.
struct EpsilonSchedule {
  double start = 0.9;
  double end = 0.05;
  double decay_fraction = 0.6;

  double at(std::size_t episode, std::size_t budget) const;
};

struct PolicyConfig {
  double gamma = 0.95;
  double alpha = 0.5;
  // Per-pair step size alpha / (1 + visits / alpha_decay_visits); 0 keeps alpha fixed.
  double alpha_decay_visits = 10.0;
  EpsilonSchedule epsilon;
  RewardWeights weights;
  ConstraintMode constraint_mode = ConstraintMode::Penalty;
  ConstraintPenalties penalties;
  int max_turns = 40;

  /// Throws ConfigError.
  void validate() const;
};

/// `base` minus the penalty of every violated rule.
double constrained_reward(double base, const DialogState& state, StrategyId action, const PolicyConfig& config,
                          bool prerequisites_met = true);

/// True when R1 or R2 would fire; used to drop candidates in Mask mode.
bool violates_constraints(const DialogState& state, StrategyId action);

/// Candidates left after masking. Masking never empties the set: when every
/// candidate violates a rule the input is returned unchanged.
std::vector<ResponseCandidate> apply_mask(std::vector<ResponseCandidate> candidates, const DialogState& state);

/// One Q-learning step:
///   Q(s,a) += step * (r + gamma * max_{a' in next_actions} Q(s',a') - Q(s,a)).
/// `next` empty means terminal (bootstrap term 0). Returns |change|.
double q_update(QTable& q, const DialogState& s, StrategyId a, double reward, const std::optional<DialogState>& next,
                std::span<const StrategyId> next_actions, double step, double gamma);

/// Convenience overload using config.alpha and config.gamma.
double q_update(QTable& q, const DialogState& s, StrategyId a, double reward, const std::optional<DialogState>& next,
                std::span<const StrategyId> next_actions, const PolicyConfig& config);

/// With probability epsilon a uniformly random candidate; otherwise the argmax
/// of Q(s, strategy), ties to the earlier StrategyId and then the earlier
/// candidate. Returns the chosen index. Throws EmptyCandidateSet.
std::size_t select_action(const QTable& q, const DialogState& s, std::span<const ResponseCandidate> candidates,
                          double epsilon, std::mt19937_64& rng);

}  // namespace mixdialog
