#include "mixdialog/episode.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace mixdialog {

std::uint32_t VisitCounts::get(const DialogState& s, StrategyId a) const {
  const auto it = counts_.find(s.key());
  return it == counts_.end() ? 0 : it->second[index_of(a)];
}

std::uint32_t VisitCounts::bump(const DialogState& s, StrategyId a) {
  auto& row = counts_.try_emplace(s.key()).first->second;
  return ++row[index_of(a)];
}

namespace {

struct Transition {
  DialogState state;
  StrategyId action;
  double reward;
  std::optional<DialogState> next;
  std::vector<StrategyId> next_actions;
};

bool repeats_user(const Conversation& conv, const std::string& text) {
  const auto& us = conv.utterances();
  return std::any_of(us.begin(), us.end(),
                     [&](const Utterance& u) { return u.speaker == Speaker::User && u.text == text; });
}

EpisodeResult run(const DialogEngine& engine, const QTable& policy_q, QTable* learn_q, VisitCounts* visits,
                  UserSimulator& simulator, const PolicyConfig& config, const EpisodeOptions& options) {
  EpisodeResult result;
  for (int attempt = 0; attempt <= options.max_restarts; ++attempt) {
    simulator.begin_attempt(static_cast<std::uint64_t>(attempt));
    std::mt19937_64 rng(mix_seed(options.seed, static_cast<std::uint64_t>(attempt)));
    DialogContext ctx = engine.start(options.conversation_id);
    std::vector<Transition> transitions;
    std::vector<int> apps;
    std::optional<Transition> pending;
    EndReason reason = EndReason::MaxTurns;
    bool restart = false;

    while (true) {
      if (static_cast<int>(ctx.conversation.size()) >= config.max_turns) {
        reason = EndReason::MaxTurns;
        break;
      }
      SimulatedReply reply = simulator.respond(ctx.conversation);
      if (repeats_user(ctx.conversation, reply.utterance.text)) {
        restart = true;
        break;
      }
      engine.observe_user(ctx, std::move(reply.utterance));
      if (reply.leaves) {
        reason = ctx.progress.task_success() ? EndReason::TaskComplete : EndReason::UserQuit;
        break;
      }
      if (static_cast<int>(ctx.conversation.size()) >= config.max_turns) {
        reason = EndReason::MaxTurns;
        break;
      }
      TurnPlan plan = engine.plan(ctx);
      if (plan.candidates.empty()) {
        reason = ctx.progress.task_success() ? EndReason::TaskComplete : EndReason::UserQuit;
        break;
      }
      if (pending) {
        pending->next = plan.state;
        pending->next_actions = plan.actions();
        transitions.push_back(std::move(*pending));
        pending.reset();
      }
      const double epsilon = learn_q ? options.epsilon : 0.0;
      const std::size_t idx = select_action(policy_q, plan.state, plan.candidates, epsilon, rng);
      const ResponseCandidate& chosen = plan.candidates[idx];
      const int app = plan.appropriateness[idx];
      apps.push_back(app);
      const double r = constrained_reward(config.weights.app * app, plan.state, chosen.strategy, config,
                                          chosen.prerequisites_met);
      pending = Transition{plan.state, chosen.strategy, r, std::nullopt, {}};
      engine.commit(ctx, chosen);
    }

    if (restart) {
      ++result.restarts;
      continue;
    }

    result.conversation = end_conversation(std::move(ctx.conversation), reason);
    result.progress = std::move(ctx.progress);
    result.app_scores = std::move(apps);
    const DepthResult depth = conversation_depth(result.conversation);
    result.reward.app = result.app_scores.empty() ? 0 : result.app_scores.back();
    result.reward.conv_depth = depth.deep;
    result.reward.info_gain = information_gain(result.conversation);
    result.reward.conv_len = static_cast<int>(result.conversation.size());
    if (pending) {
      pending->reward += combine(result.reward, config.weights, RewardPhase::EpisodeEnd);
      transitions.push_back(std::move(*pending));
    }

    if (learn_q) {
      for (const auto& t : transitions) {
        double step = config.alpha;
        if (visits) {
          const std::uint32_t n = visits->get(t.state, t.action);
          if (config.alpha_decay_visits > 0) step = config.alpha / (1.0 + n / config.alpha_decay_visits);
          visits->bump(t.state, t.action);
        }
        const double delta =
            q_update(*learn_q, t.state, t.action, t.reward, t.next, t.next_actions, step, config.gamma);
        result.max_q_change = std::max(result.max_q_change, delta);
        result.sum_q_change += delta;
        ++result.updates;
      }
    }
    return result;
  }
  throw SimulatorFailure("simulator repeated itself on " + std::to_string(options.max_restarts + 1) +
                         " consecutive attempts");
}

}  // namespace

EpisodeResult run_episode(const DialogEngine& engine, QTable& q, VisitCounts* visits, UserSimulator& simulator,
                          const PolicyConfig& config, const EpisodeOptions& options) {
  return run(engine, q, &q, visits, simulator, config, options);
}

EpisodeResult run_greedy_episode(const DialogEngine& engine, const QTable& q, UserSimulator& simulator,
                                 const PolicyConfig& config, const EpisodeOptions& options) {
  return run(engine, q, nullptr, nullptr, simulator, config, options);
}

}  // namespace mixdialog
