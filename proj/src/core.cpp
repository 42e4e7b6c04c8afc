#include "mixdialog/core.hpp"

#include <algorithm>
#include <cctype>

namespace mixdialog {

namespace {

constexpr std::array<std::string_view, kStrategyCount> kStrategyNames = {
    "ElicitMovieType",    "IntroduceFavoriteSuperhero",
    "GroundOnSuperhero",  "DiscussRelevantMovie",
    "DiscussMovieDetail", "SawTheMovie",
    "PromoteTheMovie",    "InviteToMovie",
    "Retrieval",          "ActiveParticipation",
    "Grounding",          "Personalized",
};

constexpr std::array<std::string_view, kTopicCount> kTopicNames = {
    "Superheroes", "DisneyMovies", "MoviesGeneral", "PromotedMovie", "Social", "Other",
};

constexpr std::array<std::string_view, 4> kEndReasonNames = {
    "UserQuit", "TaskComplete", "SimulatorRepeat", "MaxTurns",
};

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(const std::array<std::string_view, N>& names, std::string_view name) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<Enum>(it - names.begin());
}

}  // namespace

std::string_view to_string(StrategyId s) noexcept { return kStrategyNames[index_of(s)]; }

std::optional<StrategyId> strategy_from_string(std::string_view name) noexcept {
  return lookup<StrategyId>(kStrategyNames, name);
}

std::string_view to_string(Topic t) noexcept { return kTopicNames[static_cast<std::size_t>(t)]; }

std::optional<Topic> topic_from_string(std::string_view name) noexcept {
  return lookup<Topic>(kTopicNames, name);
}

std::string_view to_string(Speaker s) noexcept {
  return s == Speaker::System ? "System" : "User";
}

std::optional<Speaker> speaker_from_string(std::string_view name) noexcept {
  if (name == "System") return Speaker::System;
  if (name == "User") return Speaker::User;
  return std::nullopt;
}

std::string_view to_string(EndReason r) noexcept {
  return kEndReasonNames[static_cast<std::size_t>(r)];
}

std::optional<EndReason> end_reason_from_string(std::string_view name) noexcept {
  return lookup<EndReason>(kEndReasonNames, name);
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else if (c < 0x80 && std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

Utterance make_utterance(Speaker speaker, std::string text, int turn_index,
                         std::optional<StrategyId> strategy, std::optional<Topic> topic) {
  if (turn_index < 1) throw InvalidUtterance("turn_index must be >= 1");
  if ((speaker == Speaker::System) != strategy.has_value()) {
    throw InvalidUtterance("strategy_id must be set exactly for system utterances");
  }
  Utterance u;
  u.speaker = speaker;
  u.tokens = tokenize(text);
  u.text = std::move(text);
  u.turn_index = turn_index;
  u.strategy = strategy;
  u.topic = topic;
  return u;
}

const Utterance* Conversation::last_from(Speaker who) const noexcept {
  for (auto it = utterances_.rbegin(); it != utterances_.rend(); ++it) {
    if (it->speaker == who) return &*it;
  }
  return nullptr;
}

Conversation append_turn(Conversation conv, Utterance utt) {
  if (conv.ended()) throw ConversationEnded("conversation " + conv.id_ + " has ended");
  const Speaker expected = conv.utterances_.empty() || conv.back().speaker == Speaker::User
                               ? Speaker::System
                               : Speaker::User;
  if (utt.speaker != expected) {
    throw AlternationViolation("expected a " + std::string(to_string(expected)) + " turn");
  }
  if (utt.turn_index != conv.next_turn_index()) {
    throw AlternationViolation("turn_index " + std::to_string(utt.turn_index) +
                               " does not follow " + std::to_string(conv.size()));
  }
  if ((utt.speaker == Speaker::System) != utt.strategy.has_value()) {
    throw InvalidUtterance("strategy_id must be set exactly for system utterances");
  }
  conv.utterances_.push_back(std::move(utt));
  return conv;
}

Conversation end_conversation(Conversation conv, EndReason reason) {
  if (conv.ended()) throw ConversationEnded("conversation " + conv.id_ + " has ended");
  conv.end_reason_ = reason;
  return conv;
}

}  // namespace mixdialog
