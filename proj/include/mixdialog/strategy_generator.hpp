#pragma once

#include <vector>

#include "mixdialog/candidate.hpp"
#include "mixdialog/core.hpp"
#include "mixdialog/knowledge_base.hpp"
#include "mixdialog/retrieval_index.hpp"
#include "mixdialog/understanding.hpp"
#include "mixdialog/user_profile.hpp"

namespace mixdialog {

inline constexpr int kPersonalizationThreshold = 3;

struct NonTaskContext {
  const Conversation& conversation;
  const UnderstandingResult& nlu;  // analysis of the latest user turn
  const UserProfile& profile;
};

/// Conversation-strategy candidates:
///  - ActiveParticipation: a follow-up question on the current topic, always;
///  - Grounding: a confirmation question built from KB attributes of the first
///    entity in the latest user turn, only when one was detected;
///  - Personalized: an offer to return to the most engaged topic, only when
///    some topic reached kPersonalizationThreshold user turns.
std::vector<ResponseCandidate> generate_strategy_candidates(const NonTaskContext& ctx, const KnowledgeBase& kb);

/// Top retrieval hit for the latest user turn that the system has not said
/// before and that does not echo the user. Empty when nothing scores above 0.
std::vector<ResponseCandidate> generate_retrieval_candidates(const NonTaskContext& ctx, const RetrievalIndex& index);

/// Follow-up questions per topic, in rotation order.
const std::vector<std::string>& active_participation_questions(Topic topic);

}  // namespace mixdialog
