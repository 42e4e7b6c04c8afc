#include "mixdialog/strategy_generator.hpp"

#include <algorithm>
#include <map>

namespace mixdialog {

namespace {

bool already_said(const Conversation& conv, const std::string& text) {
  const auto& us = conv.utterances();
  return std::any_of(us.begin(), us.end(),
                     [&](const Utterance& u) { return u.speaker == Speaker::System && u.text == text; });
}

int uses_of(const Conversation& conv, StrategyId s) {
  const auto& us = conv.utterances();
  // The opener (turn 1) is not counted as a strategy use.
  return static_cast<int>(std::count_if(us.begin(), us.end(), [&](const Utterance& u) {
    return u.turn_index > 1 && u.strategy == s;
  }));
}

std::string topic_phrase(Topic t, const KnowledgeBase& kb) {
  switch (t) {
    case Topic::Superheroes: return "superheroes";
    case Topic::DisneyMovies: return "Disney movies";
    case Topic::MoviesGeneral: return "movies";
    case Topic::PromotedMovie: return kb.promoted_movie().title;
    case Topic::Social: return "your friends and family";
    case Topic::Other: break;
  }
  return "that";
}

const std::string* user_text(const Conversation& conv) {
  const Utterance* u = conv.last_from(Speaker::User);
  return u ? &u->text : nullptr;
}

}  // namespace

const std::vector<std::string>& active_participation_questions(Topic topic) {
  static const std::map<Topic, std::vector<std::string>> bank = {
      {Topic::Superheroes,
       {"Who is your favorite superhero?", "Which superhero movie did you enjoy the most?",
        "What do you like most about superheroes?", "Do you read superhero comics too?"}},
      {Topic::DisneyMovies,
       {"Which Disney movie is your favorite?", "Do you have a favorite Disney song?",
        "Do you think superheroes can be as much fun as Disney movies?"}},
      {Topic::MoviesGeneral,
       {"Which superhero do you know best?", "What kind of movies do you usually watch?",
        "What was the last movie you watched in a theater?",
        "Do you prefer watching movies at home or in a theater?"}},
      {Topic::PromotedMovie,
       {"What have you heard about Civil War so far?", "Which side do you think is right in Civil War?"}},
      {Topic::Social,
       {"Do you watch them with your kids?", "Who do you usually go to the movies with?",
        "What do you like to do on weekends?"}},
      {Topic::Other,
       {"Could you tell me more about that?", "What do you usually do for fun?",
        "What kind of movies do you usually watch?"}},
  };
  return bank.at(topic);
}

std::vector<ResponseCandidate> generate_strategy_candidates(const NonTaskContext& ctx, const KnowledgeBase& kb) {
  std::vector<ResponseCandidate> out;
  const std::string* echo = user_text(ctx.conversation);
  auto usable = [&](const std::string& text) { return (!echo || *echo != text) && !already_said(ctx.conversation, text); };

  // Active participation: rotate through the topic's questions, skipping ones already asked.
  {
    const auto& questions = active_participation_questions(ctx.nlu.topic);
    const int start = uses_of(ctx.conversation, StrategyId::ActiveParticipation);
    const std::string* pick = nullptr;
    for (std::size_t i = 0; i < questions.size() && !pick; ++i) {
      const auto& q = questions[(static_cast<std::size_t>(start) + i) % questions.size()];
      if (usable(q)) pick = &q;
    }
    if (!pick) pick = &questions[static_cast<std::size_t>(start) % questions.size()];
    out.push_back({*pick, StrategyId::ActiveParticipation, ResponseSource::NonTask, {}, false, true});
  }

  if (!ctx.nlu.entities.empty()) {
    const EntityMatch& e = ctx.nlu.entities.front();
    std::string text;
    if (const Movie* m = kb.find_movie(e.entity_id)) {
      text = "Are you talking about " + m->title + ", the " + std::to_string(m->year) + " film.";
    } else if (const Hero* h = kb.find_hero(e.entity_id)) {
      text = "Are you talking about " + h->name + ", the one who " + h->origin + "?";
    }
    if (!text.empty() && usable(text)) {
      out.push_back({std::move(text), StrategyId::Grounding, ResponseSource::NonTask, {e.entity_id}, false, true});
    }
  }

  std::optional<Topic> engaged;
  for (std::size_t t = 0; t < kTopicCount; ++t) {
    const auto topic = static_cast<Topic>(t);
    if (topic == Topic::Other) continue;
    const int score = ctx.profile.engagement(topic);
    if (score >= kPersonalizationThreshold && (!engaged || score > ctx.profile.engagement(*engaged))) {
      engaged = topic;
    }
  }
  if (engaged) {
    const std::string phrase = topic_phrase(*engaged, kb);
    for (std::string text : {"You seem to really enjoy talking about " + phrase + ". Do you want to talk more about " +
                                 phrase + "?",
                             "Let us get back to " + phrase + ". What else do you like about " + phrase + "?"}) {
      if (usable(text)) {
        out.push_back({std::move(text), StrategyId::Personalized, ResponseSource::NonTask, {}, false, true});
        break;
      }
    }
  }
  return out;
}

std::vector<ResponseCandidate> generate_retrieval_candidates(const NonTaskContext& ctx, const RetrievalIndex& index) {
  const Utterance* user = ctx.conversation.last_from(Speaker::User);
  if (!user) return {};
  // Enough depth to skip responses already used in this conversation.
  const std::size_t depth = std::min<std::size_t>(index.size(), 8 + ctx.conversation.size());
  for (const auto& hit : index.retrieve(user->tokens, depth)) {
    if (hit.score <= 0.0) break;
    if (hit.response_text == user->text || already_said(ctx.conversation, hit.response_text)) continue;
    return {{hit.response_text, StrategyId::Retrieval, ResponseSource::NonTask, {}, false, true}};
  }
  return {};
}

}  // namespace mixdialog
