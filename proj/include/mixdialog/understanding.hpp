#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mixdialog/core.hpp"
#include "mixdialog/knowledge_base.hpp"

namespace mixdialog {

enum class Polarity : std::uint8_t { Yes, No, Neither };
enum class Sentiment : std::uint8_t { Negative, Neutral, Positive };

std::string_view to_string(Polarity p) noexcept;
std::string_view to_string(Sentiment s) noexcept;

struct EntityMatch {
  std::string surface;  // as written in the input
  std::string entity_id;
  EntityKind kind;
  std::size_t offset = 0;  // byte offset of `surface` in the input

  bool operator==(const EntityMatch&) const = default;
};

struct UnderstandingResult {
  Polarity polarity = Polarity::Neither;
  std::vector<EntityMatch> entities;
  Sentiment sentiment = Sentiment::Neutral;
  Topic topic = Topic::Other;
};

/// Positive and negative word lists. Words are normalized with `tokenize`,
/// so "well-made" in the file matches the token "wellmade".
class Lexicon {
 public:
  Lexicon() = default;
  Lexicon(std::vector<std::string> positive, std::vector<std::string> negative);

  /// Loads `<dir>/positive.txt` and `<dir>/negative.txt`; blank lines and
  /// lines starting with '#' are skipped. Throws ParseError if either is missing.
  static Lexicon load(const std::filesystem::path& dir);

  bool positive(std::string_view token) const { return positive_.count(std::string(token)) > 0; }
  bool negative(std::string_view token) const { return negative_.count(std::string(token)) > 0; }
  std::size_t size() const noexcept { return positive_.size() + negative_.size(); }

 private:
  std::set<std::string, std::less<>> positive_;
  std::set<std::string, std::less<>> negative_;
};

/// Keyword rule: negation tokens win over affirmations unless an affirmation
/// occurs first. "i do"/"i have" only count as affirmations when not directly
/// followed by a negation ("i do not").
Polarity classify_yes_no(const Utterance& utt);

/// Longest-match, case-insensitive, word-bounded scan. Overlaps resolve to
/// the longer surface form; the result is ordered by offset.
std::vector<EntityMatch> detect_entities(std::string_view text, const EntityLookup& kb);

Sentiment score_sentiment(const Utterance& utt, const Lexicon& lexicon);

/// Priority PromotedMovie > Superheroes > DisneyMovies > MoviesGeneral >
/// Social > Other. Total over all inputs.
Topic label_topic(std::string_view text, const KnowledgeBase& kb);
Topic label_topic(const Utterance& utt, const KnowledgeBase& kb);

/// Bundles the analyses above for one utterance.
class Understanding {
 public:
  Understanding(const KnowledgeBase& kb, const Lexicon& lexicon) : kb_(&kb), lexicon_(&lexicon) {}

  UnderstandingResult analyze(const Utterance& utt) const;

  const KnowledgeBase& kb() const noexcept { return *kb_; }
  const Lexicon& lexicon() const noexcept { return *lexicon_; }

 private:
  const KnowledgeBase* kb_;
  const Lexicon* lexicon_;
};

}  // namespace mixdialog
