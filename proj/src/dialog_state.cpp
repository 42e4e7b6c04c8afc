#include "mixdialog/dialog_state.hpp"

#include <algorithm>
#include <bitset>

namespace mixdialog {

std::string_view to_string(Variant v) noexcept {
  switch (v) {
    case Variant::TaskGlobal: return "TaskGlobal";
    case Variant::MixLocal: return "MixLocal";
    case Variant::MixGlobal: break;
  }
  return "MixGlobal";
}

Variant parse_variant(std::string_view name) {
  for (Variant v : kAllVariants) {
    if (to_string(v) == name) return v;
  }
  throw UnknownVariant("unknown variant '" + std::string(name) + "'");
}

TurnBucket bucket_for_turn(int turn_index) noexcept {
  if (turn_index <= 3) return TurnBucket::T1_3;
  if (turn_index <= 6) return TurnBucket::T4_6;
  if (turn_index <= 10) return TurnBucket::T7_10;
  return TurnBucket::T11plus;
}

std::uint64_t DialogState::key() const {
  std::uint64_t k = static_cast<std::uint64_t>(turn_bucket);
  for (std::size_t i = 0; i < kStrategyCount; ++i) {
    k |= static_cast<std::uint64_t>(strategy_counts[i] & 0x3u) << (2 + 2 * i);
  }
  k |= static_cast<std::uint64_t>(sentiment) << 26;
  k |= static_cast<std::uint64_t>(coherence) << 28;
  const std::uint64_t last = last_strategy ? index_of(*last_strategy) + 1 : 0;
  k |= last << 29;
  k |= static_cast<std::uint64_t>(task_progress & 0xF) << 33;
  return k;
}

DialogState DialogState::from_key(std::uint64_t k) {
  DialogState s;
  s.turn_bucket = static_cast<TurnBucket>(k & 0x3u);
  for (std::size_t i = 0; i < kStrategyCount; ++i) {
    s.strategy_counts[i] = static_cast<std::uint8_t>((k >> (2 + 2 * i)) & 0x3u);
  }
  s.sentiment = static_cast<Sentiment>((k >> 26) & 0x3u);
  s.coherence = static_cast<Coherence>((k >> 28) & 0x1u);
  const auto last = (k >> 29) & 0xFu;
  if (last > 0) s.last_strategy = static_cast<StrategyId>(last - 1);
  s.task_progress = static_cast<int>((k >> 33) & 0xFu);
  return s;
}

std::string DialogState::to_string() const {
  std::string out = "t" + std::to_string(static_cast<int>(turn_bucket)) + "|c=";
  for (auto c : strategy_counts) out.push_back(static_cast<char>('0' + c));
  out += "|s=";
  out.push_back(sentiment == Sentiment::Negative ? '-' : sentiment == Sentiment::Positive ? '+' : '0');
  out += "|h=";
  out.push_back(coherence == Coherence::High ? '1' : '0');
  out += "|l=";
  out += last_strategy ? std::string(mixdialog::to_string(*last_strategy)) : "-";
  out += "|p=" + std::to_string(task_progress);
  return out;
}

DialogState DialogState::parse(std::string_view text) {
  auto fail = [&]() -> DialogState { throw ParseError("malformed state key '" + std::string(text) + "'"); };
  std::vector<std::string_view> parts;
  for (std::size_t start = 0;;) {
    const auto bar = text.find('|', start);
    parts.push_back(text.substr(start, bar == std::string_view::npos ? std::string_view::npos : bar - start));
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  if (parts.size() != 6) return fail();
  DialogState s;
  if (parts[0].size() != 2 || parts[0][0] != 't' || parts[0][1] < '0' || parts[0][1] > '3') return fail();
  s.turn_bucket = static_cast<TurnBucket>(parts[0][1] - '0');
  if (parts[1].size() != 2 + kStrategyCount || parts[1].substr(0, 2) != "c=") return fail();
  for (std::size_t i = 0; i < kStrategyCount; ++i) {
    const char c = parts[1][2 + i];
    if (c < '0' || c > '0' + kStrategyCountCap) return fail();
    s.strategy_counts[i] = static_cast<std::uint8_t>(c - '0');
  }
  if (parts[2] == "s=-") s.sentiment = Sentiment::Negative;
  else if (parts[2] == "s=0") s.sentiment = Sentiment::Neutral;
  else if (parts[2] == "s=+") s.sentiment = Sentiment::Positive;
  else return fail();
  if (parts[3] == "h=0") s.coherence = Coherence::Low;
  else if (parts[3] == "h=1") s.coherence = Coherence::High;
  else return fail();
  if (parts[4].substr(0, 2) != "l=") return fail();
  if (parts[4] != "l=-") {
    auto strategy = strategy_from_string(parts[4].substr(2));
    if (!strategy) return fail();
    s.last_strategy = strategy;
  }
  if (parts[5].size() != 3 || parts[5].substr(0, 2) != "p=" || parts[5][2] < '0' || parts[5][2] > '8') return fail();
  s.task_progress = parts[5][2] - '0';
  return s;
}

DialogState featurize(const Conversation& conv, Variant variant, Coherence coherence, const Lexicon& lexicon) {
  const auto& all = conv.utterances();
  const std::size_t begin =
      variant == Variant::MixLocal && all.size() > kLocalHistoryTurns ? all.size() - kLocalHistoryTurns : 0;

  DialogState s;
  // MixLocal cannot count turns it no longer sees, so its bucket is local too.
  s.turn_bucket = bucket_for_turn(static_cast<int>(all.size() - begin));
  s.coherence = coherence;

  int positive = 0;
  int negative = 0;
  int neutral = 0;
  std::bitset<kTaskStrategyCount> tasks;
  for (std::size_t i = begin; i < all.size(); ++i) {
    const Utterance& u = all[i];
    if (u.speaker == Speaker::System) {
      s.last_strategy = u.strategy;
      if (u.turn_index == 1) continue;
      auto& c = s.strategy_counts[index_of(*u.strategy)];
      c = static_cast<std::uint8_t>(std::min(kStrategyCountCap, c + 1));
      if (is_task(*u.strategy)) tasks.set(index_of(*u.strategy));
    } else {
      switch (score_sentiment(u, lexicon)) {
        case Sentiment::Positive: ++positive; break;
        case Sentiment::Negative: ++negative; break;
        case Sentiment::Neutral: ++neutral; break;
      }
    }
  }
  // Majority label; ties go to Neutral.
  if (positive > negative && positive > neutral) s.sentiment = Sentiment::Positive;
  else if (negative > positive && negative > neutral) s.sentiment = Sentiment::Negative;
  else s.sentiment = Sentiment::Neutral;
  s.task_progress = static_cast<int>(tasks.count());
  return s;
}

}  // namespace mixdialog
