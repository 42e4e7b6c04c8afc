#include "mixdialog/policy.hpp"

#include <algorithm>
#include <cmath>

namespace mixdialog {

double EpsilonSchedule::at(std::size_t episode, std::size_t budget) const {
  const double horizon = decay_fraction * static_cast<double>(budget);
  const double e = static_cast<double>(episode);
  if (e >= horizon) return end;
  if (start <= 0.0 || end <= 0.0) return start + (end - start) * e / horizon;
  return start * std::pow(end / start, e / horizon);
}

void PolicyConfig::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("gamma must lie strictly inside (0, 1)");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
  if (!(alpha_decay_visits >= 0.0)) throw ConfigError("alpha_decay_visits must be non-negative");
  for (double e : {epsilon.start, epsilon.end}) {
    if (!(e >= 0.0 && e <= 1.0)) throw ConfigError("epsilon values must lie in [0, 1]");
  }
  if (!(epsilon.decay_fraction >= 0.0 && epsilon.decay_fraction <= 1.0)) {
    throw ConfigError("epsilon decay_fraction must lie in [0, 1]");
  }
  if (!weights.finite()) throw ConfigError("reward weights must be finite");
  if (!std::isfinite(penalties.repeat_last) || !std::isfinite(penalties.overused_nontask) ||
      !std::isfinite(penalties.out_of_order)) {
    throw ConfigError("constraint penalties must be finite");
  }
  if (max_turns < 2) throw ConfigError("max_turns must be at least 2");
}

bool violates_constraints(const DialogState& state, StrategyId action) {
  if (state.last_strategy == action) return true;
  return !is_task(action) && state.count(action) >= kStrategyCountCap;
}

double constrained_reward(double base, const DialogState& state, StrategyId action, const PolicyConfig& config,
                          bool prerequisites_met) {
  double r = base;
  if (state.last_strategy == action) r -= config.penalties.repeat_last;
  if (!is_task(action) && state.count(action) >= kStrategyCountCap) r -= config.penalties.overused_nontask;
  if (is_task(action) && !prerequisites_met) r -= config.penalties.out_of_order;
  return r;
}

std::vector<ResponseCandidate> apply_mask(std::vector<ResponseCandidate> candidates, const DialogState& state) {
  std::vector<ResponseCandidate> kept;
  for (const auto& c : candidates) {
    if (!violates_constraints(state, c.strategy)) kept.push_back(c);
  }
  return kept.empty() ? candidates : kept;
}

double q_update(QTable& q, const DialogState& s, StrategyId a, double reward, const std::optional<DialogState>& next,
                std::span<const StrategyId> next_actions, double step, double gamma) {
  const double old = q.value(s, a);
  const double bootstrap = next ? q.max_value(*next, next_actions) : 0.0;
  const double updated = old + step * (reward + gamma * bootstrap - old);
  q.set(s, a, updated);
  return std::abs(updated - old);
}

double q_update(QTable& q, const DialogState& s, StrategyId a, double reward, const std::optional<DialogState>& next,
                std::span<const StrategyId> next_actions, const PolicyConfig& config) {
  return q_update(q, s, a, reward, next, next_actions, config.alpha, config.gamma);
}

std::size_t select_action(const QTable& q, const DialogState& s, std::span<const ResponseCandidate> candidates,
                          double epsilon, std::mt19937_64& rng) {
  if (candidates.empty()) throw EmptyCandidateSet("no response candidates to choose from");
  if (epsilon > 0.0) {
    std::bernoulli_distribution explore(std::min(1.0, epsilon));
    if (explore(rng)) {
      std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
      return pick(rng);
    }
  }
  std::size_t best = 0;
  double best_value = q.value(s, candidates[0].strategy);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double v = q.value(s, candidates[i].strategy);
    const bool better = v > best_value ||
                        (v == best_value && index_of(candidates[i].strategy) < index_of(candidates[best].strategy));
    if (better) {
      best = i;
      best_value = v;
    }
  }
  return best;
}

}  // namespace mixdialog
