#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "mixdialog/core.hpp"
#include "mixdialog/understanding.hpp"

namespace mixdialog {

enum class Variant : std::uint8_t { TaskGlobal, MixLocal, MixGlobal };

inline constexpr std::array<Variant, 3> kAllVariants = {Variant::TaskGlobal, Variant::MixLocal, Variant::MixGlobal};

std::string_view to_string(Variant v) noexcept;
/// Throws UnknownVariant.
Variant parse_variant(std::string_view name);

constexpr bool uses_nontask(Variant v) noexcept { return v != Variant::TaskGlobal; }

/// Utterances of history the local variant sees.
inline constexpr std::size_t kLocalHistoryTurns = 3;

enum class TurnBucket : std::uint8_t { T1_3, T4_6, T7_10, T11plus };
enum class Coherence : std::uint8_t { Low, High };

TurnBucket bucket_for_turn(int turn_index) noexcept;

inline constexpr int kStrategyCountCap = 2;

/// Discretized policy state. Equality and hashing go through `key()`.
struct DialogState {
  TurnBucket turn_bucket = TurnBucket::T1_3;
  std::array<std::uint8_t, kStrategyCount> strategy_counts{};  // capped at kStrategyCountCap
  Sentiment sentiment = Sentiment::Neutral;
  Coherence coherence = Coherence::Low;
  std::optional<StrategyId> last_strategy;
  int task_progress = 0;  // 0..8

  int count(StrategyId s) const { return strategy_counts[index_of(s)]; }

  /// Packed 64-bit encoding; injective over valid states.
  std::uint64_t key() const;
  static DialogState from_key(std::uint64_t key);

  /// Readable, reversible encoding used in saved Q-tables,
  /// e.g. "t3|c=110000000201|s=+|h=1|l=Grounding|p=2".
  std::string to_string() const;
  /// Throws ParseError.
  static DialogState parse(std::string_view text);

  bool operator==(const DialogState& o) const { return key() == o.key(); }
};

/// Discretizes the conversation so far. The opener (turn 1) sets
/// `last_strategy` but is not counted. MixLocal derives every
/// history-based field, the turn bucket included, from the last
/// kLocalHistoryTurns utterances only.
DialogState featurize(const Conversation& conv, Variant variant, Coherence coherence, const Lexicon& lexicon);

}  // namespace mixdialog
