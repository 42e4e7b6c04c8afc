#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mixdialog/candidate.hpp"
#include "mixdialog/dialog_state.hpp"
#include "mixdialog/knowledge_base.hpp"
#include "mixdialog/policy.hpp"
#include "mixdialog/retrieval_index.hpp"
#include "mixdialog/reward.hpp"
#include "mixdialog/strategy_generator.hpp"
#include "mixdialog/task_generator.hpp"
#include "mixdialog/understanding.hpp"
#include "mixdialog/user_profile.hpp"

namespace mixdialog {

inline constexpr std::string_view kOpenerText = "Hello, I really like movies. How about we talk about movies?";
inline constexpr StrategyId kOpenerStrategy = StrategyId::ActiveParticipation;

/// Everything loaded from the data directory. Read-only after loading.
struct Resources {
  KnowledgeBase kb;
  Lexicon lexicon;
  RetrievalIndex interview;
  RetrievalIndex subtitles;

  /// Expects kb.json, lexicon/{positive,negative}.txt and
  /// corpus/{interview,subtitles}.tsv under `data_dir`.
  static Resources load(const std::filesystem::path& data_dir);
};

/// Per-conversation dialog memory.
struct DialogContext {
  Conversation conversation;
  TaskProgress progress;
  UserProfile profile;
  UnderstandingResult last_nlu;
};

struct TurnPlan {
  std::vector<ResponseCandidate> candidates;
  std::vector<int> appropriateness;  // parallel to candidates
  DialogState state;

  std::vector<StrategyId> actions() const;
};

/// Runs the understanding -> generation -> state pipeline for one variant.
/// Selection and learning live with the caller.
class DialogEngine {
 public:
  DialogEngine(const Resources& resources, Variant variant, ConstraintMode mode = ConstraintMode::Penalty);

  Variant variant() const noexcept { return variant_; }
  const Resources& resources() const noexcept { return *resources_; }

  /// A fresh conversation holding only the opener.
  DialogContext start(std::string conversation_id) const;

  /// Labels and appends a user turn, then updates understanding, profile
  /// and the SawTheMovie answer.
  void observe_user(DialogContext& ctx, Utterance user) const;
  void observe_user(DialogContext& ctx, std::string text) const;

  /// Candidates for the next system turn (task only for TaskGlobal),
  /// their appropriateness scores and the resulting policy state.
  TurnPlan plan(const DialogContext& ctx) const;

  /// Appends the chosen system turn and records task delivery.
  void commit(DialogContext& ctx, const ResponseCandidate& chosen) const;

 private:
  const Resources* resources_;
  Variant variant_;
  ConstraintMode mode_;
  Understanding understanding_;
  TaskGenerator task_generator_;
  HeuristicAppropriateness appropriateness_;
};

}  // namespace mixdialog
