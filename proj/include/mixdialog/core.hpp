#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mixdialog/errors.hpp"

namespace mixdialog {

enum class Speaker : std::uint8_t { System, User };

/// Response strategies. The first eight are the task templates in narrative
/// order; the last four are the non-task (social) strategies. The declaration
/// order is also the fixed tie-break order used by action selection.
enum class StrategyId : std::uint8_t {
  ElicitMovieType,
  IntroduceFavoriteSuperhero,
  GroundOnSuperhero,
  DiscussRelevantMovie,
  DiscussMovieDetail,
  SawTheMovie,
  PromoteTheMovie,
  InviteToMovie,
  Retrieval,
  ActiveParticipation,
  Grounding,
  Personalized,
};

inline constexpr std::size_t kStrategyCount = 12;
inline constexpr std::size_t kTaskStrategyCount = 8;

inline constexpr std::array<StrategyId, kStrategyCount> kAllStrategies = {
    StrategyId::ElicitMovieType,   StrategyId::IntroduceFavoriteSuperhero,
    StrategyId::GroundOnSuperhero, StrategyId::DiscussRelevantMovie,
    StrategyId::DiscussMovieDetail, StrategyId::SawTheMovie,
    StrategyId::PromoteTheMovie,   StrategyId::InviteToMovie,
    StrategyId::Retrieval,         StrategyId::ActiveParticipation,
    StrategyId::Grounding,         StrategyId::Personalized,
};

inline constexpr std::array<StrategyId, kTaskStrategyCount> kTaskStrategies = {
    StrategyId::ElicitMovieType,   StrategyId::IntroduceFavoriteSuperhero,
    StrategyId::GroundOnSuperhero, StrategyId::DiscussRelevantMovie,
    StrategyId::DiscussMovieDetail, StrategyId::SawTheMovie,
    StrategyId::PromoteTheMovie,   StrategyId::InviteToMovie,
};

constexpr std::size_t index_of(StrategyId s) noexcept {
  return static_cast<std::size_t>(s);
}

constexpr bool is_task(StrategyId s) noexcept {
  return index_of(s) < kTaskStrategyCount;
}

std::string_view to_string(StrategyId s) noexcept;
std::optional<StrategyId> strategy_from_string(std::string_view name) noexcept;

enum class Topic : std::uint8_t {
  Superheroes,
  DisneyMovies,
  MoviesGeneral,
  PromotedMovie,
  Social,
  Other,
};

inline constexpr std::size_t kTopicCount = 6;

std::string_view to_string(Topic t) noexcept;
std::optional<Topic> topic_from_string(std::string_view name) noexcept;

std::string_view to_string(Speaker s) noexcept;
std::optional<Speaker> speaker_from_string(std::string_view name) noexcept;

enum class EndReason : std::uint8_t { UserQuit, TaskComplete, SimulatorRepeat, MaxTurns };

std::string_view to_string(EndReason r) noexcept;
std::optional<EndReason> end_reason_from_string(std::string_view name) noexcept;

/// Lowercases, removes every non-alphanumeric character and splits on
/// whitespace. "Spider-man" becomes "spiderman", "don't" becomes "dont".
std::vector<std::string> tokenize(std::string_view text);

/// One transcript line. Build with `make_utterance` so `tokens` always
/// matches `text` and the strategy/speaker invariant holds.
struct Utterance {
  Speaker speaker = Speaker::User;
  std::string text;
  std::vector<std::string> tokens;
  int turn_index = 0;
  std::optional<StrategyId> strategy;  // set iff speaker == System
  std::optional<Topic> topic;

  bool operator==(const Utterance&) const = default;
};

/// Throws InvalidUtterance when `strategy` presence disagrees with the speaker
/// or `turn_index` is not positive.
Utterance make_utterance(Speaker speaker, std::string text, int turn_index,
                         std::optional<StrategyId> strategy = std::nullopt,
                         std::optional<Topic> topic = std::nullopt);

/// An ordered dialog transcript. Values are immutable once built; the free
/// functions below return extended copies.
class Conversation {
 public:
  Conversation() = default;
  explicit Conversation(std::string id) : id_(std::move(id)) {}

  const std::string& id() const noexcept { return id_; }
  const std::vector<Utterance>& utterances() const noexcept { return utterances_; }
  std::size_t size() const noexcept { return utterances_.size(); }
  bool empty() const noexcept { return utterances_.empty(); }
  bool ended() const noexcept { return end_reason_.has_value(); }
  std::optional<EndReason> end_reason() const noexcept { return end_reason_; }

  const Utterance& back() const { return utterances_.back(); }
  int next_turn_index() const noexcept { return static_cast<int>(utterances_.size()) + 1; }

  /// Last utterance spoken by `who`, if any.
  const Utterance* last_from(Speaker who) const noexcept;

  bool operator==(const Conversation&) const = default;

 private:
  friend Conversation append_turn(Conversation conv, Utterance utt);
  friend Conversation end_conversation(Conversation conv, EndReason reason);

  std::string id_;
  std::vector<Utterance> utterances_;
  std::optional<EndReason> end_reason_;
};

/// Errors: ConversationEnded, AlternationViolation (wrong speaker order or a
/// non-consecutive turn index).
Conversation append_turn(Conversation conv, Utterance utt);

/// Marks the conversation ended. Throws ConversationEnded if it already is.
Conversation end_conversation(Conversation conv, EndReason reason);

}  // namespace mixdialog
