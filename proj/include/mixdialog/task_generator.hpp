#pragma once

#include <bitset>
#include <optional>
#include <vector>

#include "mixdialog/candidate.hpp"
#include "mixdialog/core.hpp"
#include "mixdialog/knowledge_base.hpp"
#include "mixdialog/understanding.hpp"
#include "mixdialog/user_profile.hpp"

namespace mixdialog {

/// Which task templates the user has received. A task succeeds when all
/// eight have been delivered.
class TaskProgress {
 public:
  bool delivered(StrategyId s) const { return is_task(s) && delivered_.test(index_of(s)); }
  std::vector<StrategyId> delivered_list() const;
  std::vector<StrategyId> pending() const;  // narrative order
  int delivered_count() const { return static_cast<int>(delivered_.count()); }
  bool task_success() const { return delivered_.all(); }

  /// The user's answer to SawTheMovie, once given.
  std::optional<Polarity> saw_movie_answer() const { return saw_answer_; }

  bool operator==(const TaskProgress&) const = default;

 private:
  friend TaskProgress mark_delivered(TaskProgress, StrategyId);
  friend TaskProgress record_saw_movie_answer(TaskProgress, Polarity);

  std::bitset<kTaskStrategyCount> delivered_;
  std::optional<Polarity> saw_answer_;
};

/// Throws AlreadyDelivered, or ValidationError for a non-task strategy.
TaskProgress mark_delivered(TaskProgress progress, StrategyId strategy);
TaskProgress record_saw_movie_answer(TaskProgress progress, Polarity answer);

/// Inputs for one round of task generation.
struct TaskContext {
  const Conversation& conversation;
  const UnderstandingResult& nlu;  // analysis of the latest user turn
  const TaskProgress& progress;
  const UserProfile& profile;
};

/// Gating, in narrative order:
///  - ElicitMovieType, IntroduceFavoriteSuperhero, SawTheMovie: while pending;
///  - GroundOnSuperhero: the user has mentioned a superhero;
///  - DiscussRelevantMovie, DiscussMovieDetail: a relevant movie is known
///    (the user's latest non-promoted movie, else one featuring their latest hero);
///  - PromoteTheMovie: SawTheMovie has been answered;
///  - InviteToMovie: PromoteTheMovie delivered, or SawTheMovie answered Yes.
class TaskGenerator {
 public:
  explicit TaskGenerator(const KnowledgeBase& kb) : kb_(&kb) {}

  std::vector<ResponseCandidate> generate(const TaskContext& ctx) const;

  /// The movie the relevant-movie templates would talk about, if any.
  const Movie* relevant_movie(const UserProfile& profile) const;

 private:
  const KnowledgeBase* kb_;
};

}  // namespace mixdialog
