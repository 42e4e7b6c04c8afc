#include "mixdialog/reward.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

#include "mixdialog/understanding.hpp"

namespace mixdialog {

bool RewardWeights::finite() const {
  return std::isfinite(app) && std::isfinite(depth) && std::isfinite(info) && std::isfinite(len);
}

double combine(const RewardVector& v, const RewardWeights& w, RewardPhase phase) {
  if (phase == RewardPhase::Immediate) return w.app * v.app;
  return w.depth * (v.conv_depth ? 1.0 : 0.0) + w.info * v.info_gain + w.len * v.conv_len;
}

DepthResult conversation_depth(const Conversation& conv) {
  int best = 0;
  int run = 0;
  std::optional<Topic> current;
  for (const auto& u : conv.utterances()) {
    if (u.topic && u.topic == current) {
      ++run;
    } else {
      current = u.topic;
      run = u.topic ? 1 : 0;
    }
    best = std::max(best, run);
  }
  return {best, best >= kDeepRunLength};
}

int information_gain(const Conversation& conv) {
  std::unordered_set<std::string> seen;
  for (const auto& u : conv.utterances()) seen.insert(u.tokens.begin(), u.tokens.end());
  return static_cast<int>(seen.size());
}

bool is_stopword(std::string_view token) {
  static const std::unordered_set<std::string_view> words = {
      "i",     "me",    "my",    "you",   "your",  "we",   "us",    "our",   "it",    "its",  "he",
      "she",   "they",  "them",  "his",   "her",   "a",    "an",    "the",   "is",    "am",   "are",
      "was",   "were",  "be",    "been",  "do",    "does", "did",   "have",  "has",   "had",  "to",
      "of",    "and",   "or",    "but",   "in",    "on",   "at",    "for",   "with",  "about", "as",
      "that",  "this",  "these", "those", "what",  "which", "who",  "how",   "why",   "when", "where",
      "so",    "too",   "very",  "really", "just", "like", "not",   "no",    "yes",   "dont", "im",
      "can",   "will",  "would", "could", "there", "if",   "then",  "than",  "from",  "up",   "out",
      "all",   "any",   "some",  "more",  "most",  "much", "many",  "one",   "also",  "oh",   "well",
      "okay",  "ok",    "sure",  "yeah",  "thats", "its",  "ive",   "id",    "youre", "lets", "by",
  };
  return words.count(token) > 0;
}

namespace {

std::set<std::string> content_tokens(const std::vector<std::string>& tokens) {
  std::set<std::string> out;
  for (const auto& t : tokens) {
    if (!is_stopword(t)) out.insert(t);
  }
  return out;
}

}  // namespace

int HeuristicAppropriateness::score(const Utterance* context, const ResponseCandidate& candidate,
                                    std::optional<StrategyId> previous) const {
  if (previous && *previous == candidate.strategy) return 0;
  if (candidate.precondition_just_met) return 2;
  const bool question = !candidate.text.empty() && candidate.text.back() == '?';
  if (!context) return question ? 1 : 0;

  std::set<std::string> context_entities;
  for (const auto& e : detect_entities(context->text, *kb_)) context_entities.insert(e.entity_id);
  std::set<std::string> candidate_entities(candidate.entity_ids.begin(), candidate.entity_ids.end());
  for (const auto& e : detect_entities(candidate.text, *kb_)) candidate_entities.insert(e.entity_id);
  const bool shared_entity = std::any_of(candidate_entities.begin(), candidate_entities.end(),
                                         [&](const std::string& id) { return context_entities.count(id) > 0; });
  if (shared_entity) return 2;

  const auto ctx_tokens = content_tokens(context->tokens);
  const auto cand_tokens = content_tokens(tokenize(candidate.text));
  int shared = 0;
  for (const auto& t : cand_tokens) shared += ctx_tokens.count(t) ? 1 : 0;
  if (shared >= 2) return 2;
  if (shared == 1) {
    const Topic a = label_topic(context->text, *kb_);
    const Topic b = label_topic(candidate.text, *kb_);
    if (a == b && a != Topic::Other) return 2;
    return 1;
  }
  return question ? 1 : 0;
}

}  // namespace mixdialog
