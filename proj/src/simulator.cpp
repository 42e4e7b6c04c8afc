#include "mixdialog/simulator.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <random>
#include <set>
#include <vector>

namespace mixdialog {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void PersonaMarginals::validate() const {
  for (double p : {likes_superheroes, likes_disney, seen_promoted_movie, accepts_invitation, chattiness_min,
                   chattiness_max, repeat_prob}) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("persona probabilities must lie in [0, 1]");
  }
  if (chattiness_min > chattiness_max) throw ConfigError("chattiness_min exceeds chattiness_max");
  if (patience_min < 1 || patience_min > patience_max) throw ConfigError("patience range must satisfy 1 <= min <= max");
}

Persona sample_persona(std::uint64_t seed, const PersonaMarginals& m, const KnowledgeBase& kb) {
  std::mt19937_64 rng(mix_seed(seed, 0x5eed));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Persona p;
  p.likes_superheroes = unit(rng) < m.likes_superheroes;
  p.likes_disney = unit(rng) < m.likes_disney;
  p.seen_promoted_movie = unit(rng) < m.seen_promoted_movie;
  p.accepts_invitation = unit(rng) < m.accepts_invitation;
  p.chattiness = m.chattiness_min + (m.chattiness_max - m.chattiness_min) * unit(rng);
  p.repeat_prob = m.repeat_prob;
  const auto& heroes = kb.heroes();
  p.favorite_hero = hero_entity_id(heroes[static_cast<std::size_t>(unit(rng) * heroes.size()) % heroes.size()].id);
  p.patience = m.patience_min + static_cast<int>(unit(rng) * (m.patience_max - m.patience_min + 1));
  p.patience = std::min(p.patience, m.patience_max);
  p.seed = seed;
  return p;
}

namespace {

// One flag per system turn: did that turn annoy the user?
std::vector<bool> annoying_turns(const Conversation& conv) {
  std::vector<bool> flags;
  std::array<int, kStrategyCount> uses{};
  std::set<std::string> said;
  std::optional<StrategyId> previous;
  for (const auto& u : conv.utterances()) {
    if (u.speaker != Speaker::System) continue;
    bool annoying = false;
    if (u.turn_index > 1) {
      const int n = ++uses[index_of(*u.strategy)];
      annoying = previous == u.strategy || (!is_task(*u.strategy) && n >= 3) || said.count(u.text) > 0;
    }
    flags.push_back(annoying);
    said.insert(u.text);
    previous = u.strategy;
  }
  return flags;
}

}  // namespace

int RuleBasedSimulator::annoyances(const Conversation& conv) {
  const auto flags = annoying_turns(conv);
  return static_cast<int>(std::count(flags.begin(), flags.end(), true));
}

namespace {

using Bank = std::vector<std::string>;

const Bank kSocial = {
    "I see what you mean.",
    "That is an interesting thought.",
    "I never thought about it that way.",
    "Hmm, I am not sure what to say.",
    "My brother says the same thing.",
    "I think about that sometimes.",
    "That is funny.",
    "Tell me something else.",
    "I guess that makes sense.",
    "Interesting, go on.",
};

const Bank kChatter = {
    "I had a long day at work.",
    "It is sunny here today.",
    "I just had dinner.",
    "My cat is sitting next to me.",
    "I am drinking coffee right now.",
    "I watched a documentary last night.",
    "I might go to the beach this weekend.",
    "My sister works at a movie theater.",
    "I am learning to play the guitar.",
    "We got a new puppy last month.",
};

const Bank kFarewell = {
    "I have to go now. Bye.",
    "This is getting boring, goodbye.",
    "Sorry, I need to leave now.",
    "I am done chatting for today.",
};

void replace_all(std::string& s, std::string_view from, const std::string& to) {
  for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

bool mentions(const std::vector<std::string>& tokens, std::initializer_list<std::string_view> words) {
  return std::any_of(tokens.begin(), tokens.end(), [&](const std::string& t) {
    return std::find(words.begin(), words.end(), t) != words.end();
  });
}

struct Slots {
  std::string hero;
  std::string hero_movie;
  std::string disney_movie;
};

Bank bank_for(const Persona& p, const Utterance& system) {
  const StrategyId s = *system.strategy;
  const bool hero_fan = p.likes_superheroes;
  if (system.turn_index == 1) {
    return {"I like watching movies too.", "Sure, I love movies.", "Okay, movies sound good.",
            "I watch movies sometimes."};
  }
  switch (s) {
    case StrategyId::ElicitMovieType:
      if (hero_fan && p.likes_disney) return {"I like both superhero and Disney movies.", "Both, but superhero movies a bit more."};
      if (hero_fan) return {"I like superhero movies.", "Superhero movies for sure."};
      if (p.likes_disney) return {"I like Disney movies.", "Disney movies, definitely."};
      return {"Neither, really. I like comedies.", "Not really either of those."};
    case StrategyId::IntroduceFavoriteSuperhero:
      if (hero_fan) return {"I like {hero}.", "{hero} is my favorite.", "I have always liked {hero} more."};
      return {"I don't know much about superheroes.", "I never really got into superheroes."};
    case StrategyId::GroundOnSuperhero:
      if (hero_fan) return {"Me too. I liked {hero} in {hero_movie}.", "Right, {hero} was great in {hero_movie}."};
      return {"Okay, if you say so.", "I did not notice that."};
    case StrategyId::DiscussRelevantMovie:
      if (hero_fan) return {"Yes, I have seen it.", "Yes, I saw it twice."};
      return {"No, I have not seen it.", "No, I never watched it."};
    case StrategyId::DiscussMovieDetail:
      if (hero_fan) return {"That part was great.", "I remember that scene."};
      return {"I do not remember that part.", "Maybe I should watch it."};
    case StrategyId::SawTheMovie:
      if (p.seen_promoted_movie) return {"Yes, I saw it last week.", "Yes, I have seen it already."};
      return {"No, I haven't seen it yet.", "No, not yet."};
    case StrategyId::PromoteTheMovie:
      return {"That sounds interesting.", "Maybe I will check it out.", "Good to know."};
    case StrategyId::InviteToMovie:
      if (p.accepts_invitation) return {"Sure, that sounds fun.", "Yes, let's go together."};
      return {"No, thanks. I am not interested.", "No, I would rather not."};
    case StrategyId::Grounding:
      return {"Yes. I am.", "Yes, that one.", "Yes, exactly."};
    case StrategyId::Retrieval:
    case StrategyId::ActiveParticipation:
    case StrategyId::Personalized:
      break;
  }
  // Social prompts: route on what the question is about.
  const auto& t = system.tokens;
  if (mentions(t, {"superhero", "superheroes", "hero", "heroes", "comics"})) {
    if (hero_fan) return {"I like {hero}.", "Definitely {hero}.", "{hero}, without a doubt.", "Sure, {hero} is the best."};
    return {"I am not a big fan, but {hero} is okay.", "I guess {hero}, but I do not follow superheroes much.",
            "Probably {hero}, if I had to pick."};
  }
  if (mentions(t, {"disney"})) {
    if (p.likes_disney) return {"I love {disney_movie}.", "{disney_movie} is the best one."};
    return {"I have not seen many Disney movies.", "Disney is more for my nieces."};
  }
  if (mentions(t, {"movie", "movies", "theater", "watch", "watched", "film"})) {
    if (hero_fan) return {"I watched {hero_movie} a while ago.", "Mostly superhero movies, like {hero_movie}."};
    if (p.likes_disney) return {"Mostly Disney movies, like {disney_movie}.", "I watched {disney_movie} again recently."};
    return {"I hated the last Fantastic Four movie.", "Mostly comedies, I guess.", "I rarely go to the theater."};
  }
  if (mentions(t, {"kids", "children", "weekends", "weekend", "with"})) {
    return {"I don't have any children.", "I usually go with my friends.", "I like to go hiking on weekends."};
  }
  return kSocial;
}

}  // namespace

SimulatedReply RuleBasedSimulator::respond(const Conversation& conv) {
  const Utterance* system = conv.empty() ? nullptr : &conv.back();
  if (!system || system->speaker != Speaker::System) {
    throw SimulatorFailure("simulator asked to respond when the last turn is not a system turn");
  }
  std::mt19937_64 rng(mix_seed(mix_seed(persona_.seed, attempt_), conv.size()));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int turn = conv.next_turn_index();

  std::set<std::string> previous;
  const Utterance* last_user = nullptr;
  for (const auto& u : conv.utterances()) {
    if (u.speaker == Speaker::User) {
      previous.insert(u.text);
      last_user = &u;
    }
  }

  if (last_user && unit(rng) < persona_.repeat_prob) {
    return {make_utterance(Speaker::User, last_user->text, turn), false};
  }

  auto pick_unused = [&](const Bank& bank, std::size_t offset, const std::string& suffix) -> std::optional<std::string> {
    for (std::size_t i = 0; i < bank.size(); ++i) {
      std::string text = bank[(offset + i) % bank.size()] + suffix;
      if (!previous.count(text)) return text;
    }
    return std::nullopt;
  };

  const auto flags = annoying_turns(conv);
  const bool leaving_annoyed = !flags.empty() && flags.back() &&
                               std::count(flags.begin(), flags.end(), true) >= persona_.patience;
  if (leaving_annoyed) {
    const std::size_t offset = static_cast<std::size_t>(unit(rng) * kFarewell.size());
    for (std::size_t k = 0; k < kChatter.size() + 1; ++k) {
      const std::string suffix = k == 0 ? "" : " " + kChatter[k - 1];
      if (auto text = pick_unused(kFarewell, offset, suffix)) return {make_utterance(Speaker::User, *text, turn), true};
    }
  }

  Slots slots;
  const Hero* hero = kb_->find_hero(persona_.favorite_hero);
  slots.hero = hero ? hero->name : kb_->promoted_hero().name;
  const Movie* hero_movie = hero ? kb_->movie_for_hero(persona_.favorite_hero) : nullptr;
  slots.hero_movie = hero_movie ? hero_movie->title : "The Avengers";
  slots.disney_movie = "Frozen";
  for (const auto& m : kb_->movies()) {
    if (m.is_disney) {
      slots.disney_movie = m.title;
      break;
    }
  }

  Bank bank = bank_for(persona_, *system);
  for (auto& line : bank) {
    replace_all(line, "{hero}", slots.hero);
    replace_all(line, "{hero_movie}", slots.hero_movie);
    replace_all(line, "{disney_movie}", slots.disney_movie);
  }
  const bool leaves = system->strategy == StrategyId::InviteToMovie;
  const std::size_t offset = static_cast<std::size_t>(unit(rng) * bank.size());
  const bool chatty = unit(rng) < persona_.chattiness;
  const std::size_t chatter_offset = static_cast<std::size_t>(unit(rng) * kChatter.size());

  std::vector<std::string> suffixes;
  if (chatty) {
    for (std::size_t k = 0; k < kChatter.size(); ++k) suffixes.push_back(" " + kChatter[(chatter_offset + k) % kChatter.size()]);
    suffixes.push_back("");
  } else {
    suffixes.push_back("");
    for (std::size_t k = 0; k < kChatter.size(); ++k) suffixes.push_back(" " + kChatter[(chatter_offset + k) % kChatter.size()]);
  }
  for (const auto& suffix : suffixes) {
    if (auto text = pick_unused(bank, offset, suffix)) return {make_utterance(Speaker::User, *text, turn), leaves};
  }
  for (const auto& suffix : suffixes) {
    if (auto text = pick_unused(kSocial, offset, suffix)) return {make_utterance(Speaker::User, *text, turn), leaves};
  }
  throw SimulatorFailure("simulator ran out of distinct replies");
}

}  // namespace mixdialog
