#include "mixdialog/task_generator.hpp"

#include <algorithm>

namespace mixdialog {

std::string_view to_string(ResponseSource s) noexcept {
  return s == ResponseSource::Task ? "task" : "nontask";
}

const EntityMention* UserProfile::latest(EntityKind kind) const {
  const EntityMention* best = nullptr;
  for (const auto& m : mentioned_entities) {
    if (m.kind != kind) continue;
    if (!best || m.last_turn > best->last_turn) best = &m;
  }
  return best;
}

UserProfile update_profile(UserProfile profile, const Utterance& user_turn, const UnderstandingResult& nlu) {
  if (nlu.topic != Topic::Other) ++profile.engaged_topics[static_cast<std::size_t>(nlu.topic)];
  for (const auto& e : nlu.entities) {
    auto it = std::find_if(profile.mentioned_entities.begin(), profile.mentioned_entities.end(),
                           [&](const EntityMention& m) { return m.entity_id == e.entity_id; });
    if (it == profile.mentioned_entities.end()) {
      profile.mentioned_entities.push_back({e.entity_id, e.kind, 1, user_turn.turn_index});
    } else {
      ++it->count;
      it->last_turn = user_turn.turn_index;
    }
  }
  return profile;
}

std::vector<StrategyId> TaskProgress::delivered_list() const {
  std::vector<StrategyId> out;
  for (auto s : kTaskStrategies) {
    if (delivered(s)) out.push_back(s);
  }
  return out;
}

std::vector<StrategyId> TaskProgress::pending() const {
  std::vector<StrategyId> out;
  for (auto s : kTaskStrategies) {
    if (!delivered(s)) out.push_back(s);
  }
  return out;
}

TaskProgress mark_delivered(TaskProgress progress, StrategyId strategy) {
  if (!is_task(strategy)) {
    throw ValidationError(std::string(to_string(strategy)) + " is not a task strategy");
  }
  if (progress.delivered(strategy)) {
    throw AlreadyDelivered(std::string(to_string(strategy)) + " was already delivered");
  }
  progress.delivered_.set(index_of(strategy));
  return progress;
}

TaskProgress record_saw_movie_answer(TaskProgress progress, Polarity answer) {
  progress.saw_answer_ = answer;
  return progress;
}

const Movie* TaskGenerator::relevant_movie(const UserProfile& profile) const {
  // Latest non-promoted movie the user named, else a movie featuring their latest hero.
  const EntityMention* movie_mention = nullptr;
  for (const auto& m : profile.mentioned_entities) {
    if (m.kind != EntityKind::Movie) continue;
    const Movie* movie = kb_->find_movie(m.entity_id);
    if (!movie || movie->is_promoted) continue;
    if (!movie_mention || m.last_turn > movie_mention->last_turn) movie_mention = &m;
  }
  if (movie_mention) return kb_->find_movie(movie_mention->entity_id);
  if (const EntityMention* hero = profile.latest(EntityKind::Superhero)) {
    return kb_->movie_for_hero(hero->entity_id);
  }
  return nullptr;
}

namespace {

int times_grounded(const Conversation& conv, const KnowledgeBase& kb, const std::string& hero_entity) {
  int n = 0;
  for (const auto& u : conv.utterances()) {
    if (u.speaker != Speaker::System) continue;
    if (u.strategy != StrategyId::GroundOnSuperhero && u.strategy != StrategyId::Grounding) continue;
    const auto entities = detect_entities(u.text, kb);
    if (std::any_of(entities.begin(), entities.end(),
                    [&](const EntityMatch& e) { return e.entity_id == hero_entity; })) {
      ++n;
    }
  }
  return n;
}

std::string hero_attribute_line(const Hero& hero, int rotation) {
  switch (rotation % 3) {
    case 0: return "I really like " + hero.name + "'s " + hero.eye_color + " eyes.";
    case 1: return "I really like " + hero.name + ", and " + hero.real_name + " is such a cool secret identity.";
    default: return "I really like the story of how " + hero.name + " " + hero.origin + ".";
  }
}

}  // namespace

std::vector<ResponseCandidate> TaskGenerator::generate(const TaskContext& ctx) const {
  const KnowledgeBase& kb = *kb_;
  const Movie& promoted = kb.promoted_movie();
  const Hero& favorite = kb.promoted_hero();
  const std::string promoted_id = movie_entity_id(promoted.id);

  const Utterance* last_system = ctx.conversation.last_from(Speaker::System);
  const std::optional<StrategyId> last_strategy =
      last_system ? last_system->strategy : std::optional<StrategyId>{};

  const bool hero_now = std::any_of(ctx.nlu.entities.begin(), ctx.nlu.entities.end(),
                                    [](const EntityMatch& e) { return e.kind == EntityKind::Superhero; });
  const bool relevant_now = std::any_of(ctx.nlu.entities.begin(), ctx.nlu.entities.end(), [&](const EntityMatch& e) {
    if (e.kind == EntityKind::Superhero) return true;
    const Movie* m = kb.find_movie(e.entity_id);
    return m && !m->is_promoted;
  });

  const auto saw_answer = ctx.progress.saw_movie_answer();
  const EntityMention* hero_mention = ctx.profile.latest(EntityKind::Superhero);
  const Movie* relevant = relevant_movie(ctx.profile);

  std::vector<ResponseCandidate> out;
  auto add = [&](StrategyId s, std::string text, std::vector<std::string> entities, bool just_met) {
    out.push_back({std::move(text), s, ResponseSource::Task, std::move(entities), just_met, true});
  };

  for (StrategyId s : ctx.progress.pending()) {
    switch (s) {
      case StrategyId::ElicitMovieType:
        add(s, "Do you like superhero movies or Disney movies?", {}, false);
        break;
      case StrategyId::IntroduceFavoriteSuperhero:
        add(s, "My favorite superhero is " + favorite.name + ".", {hero_entity_id(favorite.id)}, false);
        break;
      case StrategyId::GroundOnSuperhero:
        if (hero_mention) {
          const Hero& hero = *kb.find_hero(hero_mention->entity_id);
          add(s, hero_attribute_line(hero, times_grounded(ctx.conversation, kb, hero_mention->entity_id)),
              {hero_mention->entity_id}, hero_now);
        }
        break;
      case StrategyId::DiscussRelevantMovie:
        if (relevant) {
          add(s, "I really like " + relevant->title + ", have you seen it before?", {movie_entity_id(relevant->id)},
              relevant_now);
        }
        break;
      case StrategyId::DiscussMovieDetail:
        if (relevant) {
          std::string text = "I really liked " + relevant->title + ".";
          if (!relevant->detail_snippets.empty()) text += " " + relevant->detail_snippets.front();
          add(s, std::move(text), {movie_entity_id(relevant->id)}, relevant_now);
        }
        break;
      case StrategyId::SawTheMovie:
        add(s, "Have you seen the new superhero movie, '" + promoted.title + "'?", {promoted_id}, false);
        break;
      case StrategyId::PromoteTheMovie:
        if (saw_answer) {
          const std::string opener = *saw_answer == Polarity::Yes ? "One of my friends also saw '"
                                                                  : "One of my friends just saw '";
          add(s,
              opener + promoted.title + "'. They told me it is a really nice movie, much better than the previous " +
                  favorite.name + " movie.",
              {promoted_id}, last_strategy == StrategyId::SawTheMovie);
        }
        break;
      case StrategyId::InviteToMovie: {
        const bool promoted_done = ctx.progress.delivered(StrategyId::PromoteTheMovie);
        const bool saw_yes = saw_answer == Polarity::Yes;
        if (promoted_done || saw_yes) {
          const bool just = last_strategy == StrategyId::PromoteTheMovie ||
                            (saw_yes && last_strategy == StrategyId::SawTheMovie);
          add(s, "Do you want to see " + promoted.title + " together?", {promoted_id}, just);
        }
        break;
      }
      default:
        break;
    }
  }
  return out;
}

}  // namespace mixdialog
