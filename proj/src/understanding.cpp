#include "mixdialog/understanding.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>

namespace mixdialog {

namespace {

constexpr std::array<std::string_view, 9> kNegations = {
    "no", "not", "nope", "never", "havent", "dont", "didnt", "nah", "cant",
};
constexpr std::array<std::string_view, 8> kAffirmations = {
    "yes", "yeah", "yep", "sure", "definitely", "absolutely", "ok", "okay",
};

bool contains(auto const& list, std::string_view token) {
  return std::find(list.begin(), list.end(), token) != list.end();
}

bool is_word_char(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

constexpr std::array<std::string_view, 5> kSuperheroWords = {
    "superhero", "superheroes", "marvel", "comic", "comics",
};
constexpr std::array<std::string_view, 4> kDisneyWords = {"disney", "pixar", "princess", "princesses"};
constexpr std::array<std::string_view, 11> kMovieWords = {
    "movie", "movies", "film", "films", "watch", "watching", "watched",
    "cinema", "theater", "theatre", "trailer",
};
constexpr std::array<std::string_view, 12> kSocialWords = {
    "you", "your", "yours", "we", "us", "kids", "children", "family", "friend", "friends", "weekend", "together",
};

std::vector<std::string> read_word_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open lexicon file " + path.string());
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    for (auto& t : tokenize(line)) words.push_back(std::move(t));
  }
  return words;
}

}  // namespace

std::string_view to_string(Polarity p) noexcept {
  switch (p) {
    case Polarity::Yes: return "Yes";
    case Polarity::No: return "No";
    case Polarity::Neither: break;
  }
  return "Neither";
}

std::string_view to_string(Sentiment s) noexcept {
  switch (s) {
    case Sentiment::Negative: return "Negative";
    case Sentiment::Positive: return "Positive";
    case Sentiment::Neutral: break;
  }
  return "Neutral";
}

Lexicon::Lexicon(std::vector<std::string> positive, std::vector<std::string> negative) {
  for (auto& w : positive) {
    for (auto& t : tokenize(w)) positive_.insert(std::move(t));
  }
  for (auto& w : negative) {
    for (auto& t : tokenize(w)) negative_.insert(std::move(t));
  }
}

Lexicon Lexicon::load(const std::filesystem::path& dir) {
  return Lexicon(read_word_list(dir / "positive.txt"), read_word_list(dir / "negative.txt"));
}

Polarity classify_yes_no(const Utterance& utt) {
  const auto& t = utt.tokens;
  std::optional<std::size_t> first_yes;
  std::optional<std::size_t> first_no;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!first_no && contains(kNegations, t[i])) first_no = i;
    if (first_yes) continue;
    if (contains(kAffirmations, t[i])) {
      first_yes = i;
    } else if (t[i] == "i" && i + 1 < t.size() && (t[i + 1] == "do" || t[i + 1] == "have")) {
      const bool negated = i + 2 < t.size() && contains(kNegations, t[i + 2]);
      if (!negated) first_yes = i;
    }
  }
  if (!first_yes && !first_no) return Polarity::Neither;
  if (!first_no) return Polarity::Yes;
  if (!first_yes) return Polarity::No;
  return *first_yes < *first_no ? Polarity::Yes : Polarity::No;
}

std::vector<EntityMatch> detect_entities(std::string_view text, const EntityLookup& kb) {
  const std::string lower = lowercase(text);
  struct Candidate {
    std::size_t offset;
    std::size_t length;
    const SurfaceForm* form;
  };
  std::vector<Candidate> found;
  for (const auto& form : kb.surface_forms()) {
    if (form.text.empty()) continue;
    for (std::size_t pos = lower.find(form.text); pos != std::string::npos;
         pos = lower.find(form.text, pos + 1)) {
      const std::size_t end = pos + form.text.size();
      const bool left_ok = pos == 0 || !is_word_char(static_cast<unsigned char>(lower[pos - 1]));
      const bool right_ok = end == lower.size() || !is_word_char(static_cast<unsigned char>(lower[end]));
      if (left_ok && right_ok) found.push_back({pos, form.text.size(), &form});
    }
  }
  // Longer forms first, then leftmost; keep a match only if it overlaps nothing kept.
  std::stable_sort(found.begin(), found.end(), [](const Candidate& a, const Candidate& b) {
    if (a.length != b.length) return a.length > b.length;
    return a.offset < b.offset;
  });
  std::vector<Candidate> kept;
  for (const auto& c : found) {
    const bool overlaps = std::any_of(kept.begin(), kept.end(), [&](const Candidate& k) {
      return c.offset < k.offset + k.length && k.offset < c.offset + c.length;
    });
    if (!overlaps) kept.push_back(c);
  }
  std::sort(kept.begin(), kept.end(),
            [](const Candidate& a, const Candidate& b) { return a.offset < b.offset; });
  std::vector<EntityMatch> out;
  out.reserve(kept.size());
  for (const auto& k : kept) {
    out.push_back({std::string(text.substr(k.offset, k.length)), k.form->entity_id, k.form->kind, k.offset});
  }
  return out;
}

Sentiment score_sentiment(const Utterance& utt, const Lexicon& lexicon) {
  int score = 0;
  for (const auto& t : utt.tokens) {
    if (lexicon.positive(t)) ++score;
    if (lexicon.negative(t)) --score;
  }
  if (score > 0) return Sentiment::Positive;
  if (score < 0) return Sentiment::Negative;
  return Sentiment::Neutral;
}

Topic label_topic(std::string_view text, const KnowledgeBase& kb) {
  const auto entities = detect_entities(text, kb);
  const auto tokens = tokenize(text);
  auto has_word = [&](auto const& words) {
    return std::any_of(tokens.begin(), tokens.end(), [&](const std::string& t) { return contains(words, t); });
  };
  auto has_entity = [&](auto pred) { return std::any_of(entities.begin(), entities.end(), pred); };

  const std::string promoted = movie_entity_id(kb.promoted_movie().id);
  if (has_entity([&](const EntityMatch& e) { return e.entity_id == promoted; })) return Topic::PromotedMovie;
  if (has_word(kSuperheroWords) ||
      has_entity([](const EntityMatch& e) { return e.kind == EntityKind::Superhero; })) {
    return Topic::Superheroes;
  }
  const bool disney_movie = has_entity([&](const EntityMatch& e) {
    const Movie* m = kb.find_movie(e.entity_id);
    return m && m->is_disney;
  });
  if (has_word(kDisneyWords) || disney_movie) return Topic::DisneyMovies;
  if (has_word(kMovieWords) || has_entity([](const EntityMatch& e) { return e.kind == EntityKind::Movie; })) {
    return Topic::MoviesGeneral;
  }
  if (has_word(kSocialWords)) return Topic::Social;
  return Topic::Other;
}

Topic label_topic(const Utterance& utt, const KnowledgeBase& kb) { return label_topic(utt.text, kb); }

UnderstandingResult Understanding::analyze(const Utterance& utt) const {
  UnderstandingResult r;
  r.polarity = classify_yes_no(utt);
  r.entities = detect_entities(utt.text, *kb_);
  r.sentiment = score_sentiment(utt, *lexicon_);
  r.topic = label_topic(utt.text, *kb_);
  return r;
}

}  // namespace mixdialog
