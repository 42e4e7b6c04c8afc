#pragma once

#include <optional>

#include "mixdialog/candidate.hpp"
#include "mixdialog/core.hpp"
#include "mixdialog/knowledge_base.hpp"

namespace mixdialog {

struct RewardWeights {
  double app = 1.0;
  double depth = 2.0;
  double info = 0.05;
  double len = 0.25;

  bool finite() const;
  RewardWeights scaled(double k) const { return {app * k, depth * k, info * k, len * k}; }
};

struct RewardVector {
  int app = 0;              // 0 inappropriate, 1 interpretable, 2 appropriate
  bool conv_depth = false;  // deep conversation
  int info_gain = 0;        // unique tokens
  int conv_len = 0;         // utterances
};

enum class RewardPhase : std::uint8_t { Immediate, EpisodeEnd };

/// Immediate: w.app * app. EpisodeEnd: w.depth*[deep] + w.info*info_gain + w.len*conv_len.
double combine(const RewardVector& v, const RewardWeights& w, RewardPhase phase);

inline constexpr int kDeepRunLength = 10;

struct DepthResult {
  int max_run = 0;
  bool deep = false;
};

/// Longest run of consecutive utterances sharing a topic label. An
/// unlabeled utterance breaks any run.
DepthResult conversation_depth(const Conversation& conv);

/// Size of the union of every utterance's token set.
int information_gain(const Conversation& conv);

/// Turn-level appropriateness, 0..2. Implementations may be heuristic or learned.
class AppropriatenessEstimator {
 public:
  virtual ~AppropriatenessEstimator() = default;
  /// `context` is the latest user turn (null before the user has spoken);
  /// `previous` is the strategy of the preceding system turn.
  virtual int score(const Utterance* context, const ResponseCandidate& candidate,
                    std::optional<StrategyId> previous) const = 0;
};

/// Deterministic stand-in for a trained appropriateness predictor.
///   0  the candidate repeats the previous system strategy;
///   2  it shares a KB entity with the context, shares >= 2 content tokens,
///      shares one content token and the same (non-Other) topic, or is a
///      gated task template whose gate just opened;
///   1  it is a question, or shares at least one content token;
///   0  otherwise.
class HeuristicAppropriateness final : public AppropriatenessEstimator {
 public:
  explicit HeuristicAppropriateness(const KnowledgeBase& kb) : kb_(&kb) {}

  int score(const Utterance* context, const ResponseCandidate& candidate,
            std::optional<StrategyId> previous) const override;

 private:
  const KnowledgeBase* kb_;
};

/// Function words ignored when counting shared content tokens.
bool is_stopword(std::string_view token);

}  // namespace mixdialog
