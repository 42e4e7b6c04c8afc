#include "mixdialog/knowledge_base.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

#include "mixdialog/errors.hpp"

namespace mixdialog {

namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

template <typename T>
T field(const nlohmann::json& record, const char* key, const char* what) {
  if (!record.contains(key)) {
    throw ParseError(std::string(what) + " record is missing field '" + key + "': " + record.dump());
  }
  try {
    return record.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(std::string(what) + " field '" + key + "' has the wrong type: " + record.dump());
  }
}

template <typename T>
T optional_field(const nlohmann::json& record, const char* key, T fallback, const char* what) {
  return record.contains(key) ? field<T>(record, key, what) : fallback;
}

}  // namespace

std::string_view to_string(EntityKind k) noexcept {
  return k == EntityKind::Superhero ? "Superhero" : "Movie";
}

std::string hero_entity_id(std::string_view hero_id) { return "hero:" + std::string(hero_id); }
std::string movie_entity_id(std::string_view movie_id) { return "movie:" + std::string(movie_id); }

KnowledgeBase::KnowledgeBase(std::vector<Hero> heroes, std::vector<Movie> movies)
    : heroes_(std::move(heroes)), movies_(std::move(movies)) {
  for (std::size_t i = 0; i < heroes_.size(); ++i) {
    const auto& h = heroes_[i];
    if (h.id.empty() || h.name.empty()) throw ValidationError("hero with empty id or name");
    if (!hero_index_.emplace(hero_entity_id(h.id), i).second) {
      throw ValidationError("duplicate hero id '" + h.id + "'");
    }
  }
  std::size_t promoted_count = 0;
  for (std::size_t i = 0; i < movies_.size(); ++i) {
    const auto& m = movies_[i];
    if (m.id.empty() || m.title.empty()) throw ValidationError("movie with empty id or title");
    if (!movie_index_.emplace(movie_entity_id(m.id), i).second) {
      throw ValidationError("duplicate movie id '" + m.id + "'");
    }
    for (const auto& hero : m.related_hero_ids) {
      if (!hero_index_.count(hero_entity_id(hero))) {
        throw ValidationError("movie '" + m.id + "' references unknown hero '" + hero + "'");
      }
    }
    if (m.is_promoted) {
      ++promoted_count;
      promoted_ = i;
      if (promoted_count > 1) throw ValidationError("movie '" + m.id + "' is a second promoted movie");
      if (m.related_hero_ids.empty()) {
        throw ValidationError("promoted movie '" + m.id + "' has no related heroes");
      }
    }
  }
  if (promoted_count == 0) throw ValidationError("no promoted movie");

  for (const auto& h : heroes_) {
    surfaces_.push_back({lowercase(h.name), hero_entity_id(h.id), EntityKind::Superhero});
    for (const auto& a : h.aliases) {
      surfaces_.push_back({lowercase(a), hero_entity_id(h.id), EntityKind::Superhero});
    }
  }
  for (const auto& m : movies_) {
    surfaces_.push_back({lowercase(m.title), movie_entity_id(m.id), EntityKind::Movie});
    for (const auto& a : m.aliases) {
      surfaces_.push_back({lowercase(a), movie_entity_id(m.id), EntityKind::Movie});
    }
  }
  std::stable_sort(surfaces_.begin(), surfaces_.end(),
                   [](const SurfaceForm& a, const SurfaceForm& b) { return a.text.size() > b.text.size(); });
}

const Hero& KnowledgeBase::promoted_hero() const {
  return *find_hero(hero_entity_id(promoted_movie().related_hero_ids.front()));
}

const Hero* KnowledgeBase::find_hero(std::string_view entity_id) const {
  auto it = hero_index_.find(entity_id);
  return it == hero_index_.end() ? nullptr : &heroes_[it->second];
}

const Movie* KnowledgeBase::find_movie(std::string_view entity_id) const {
  auto it = movie_index_.find(entity_id);
  return it == movie_index_.end() ? nullptr : &movies_[it->second];
}

const Movie* KnowledgeBase::movie_for_hero(std::string_view hero_entity) const {
  const Hero* hero = find_hero(hero_entity);
  if (!hero) return nullptr;
  for (const auto& m : movies_) {
    if (m.is_promoted) continue;
    if (std::find(m.related_hero_ids.begin(), m.related_hero_ids.end(), hero->id) !=
        m.related_hero_ids.end()) {
      return &m;
    }
  }
  return nullptr;
}

KnowledgeBase kb_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("heroes") || !j.contains("movies") || !j["heroes"].is_array() ||
      !j["movies"].is_array()) {
    throw ParseError("knowledge base must be an object with 'heroes' and 'movies' arrays");
  }
  std::vector<Hero> heroes;
  for (const auto& r : j["heroes"]) {
    Hero h;
    h.id = field<std::string>(r, "id", "hero");
    h.name = field<std::string>(r, "name", "hero");
    h.real_name = field<std::string>(r, "real_name", "hero");
    h.eye_color = field<std::string>(r, "eye_color", "hero");
    h.origin = field<std::string>(r, "origin", "hero");
    h.aliases = optional_field<std::vector<std::string>>(r, "aliases", {}, "hero");
    heroes.push_back(std::move(h));
  }
  std::vector<Movie> movies;
  for (const auto& r : j["movies"]) {
    Movie m;
    m.id = field<std::string>(r, "id", "movie");
    m.title = field<std::string>(r, "title", "movie");
    m.year = field<int>(r, "year", "movie");
    m.related_hero_ids = field<std::vector<std::string>>(r, "related_hero_ids", "movie");
    m.is_promoted = field<bool>(r, "is_promoted", "movie");
    m.detail_snippets = field<std::vector<std::string>>(r, "detail_snippets", "movie");
    m.is_disney = optional_field<bool>(r, "is_disney", false, "movie");
    m.aliases = optional_field<std::vector<std::string>>(r, "aliases", {}, "movie");
    movies.push_back(std::move(m));
  }
  return KnowledgeBase(std::move(heroes), std::move(movies));
}

KnowledgeBase load_kb(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open knowledge base file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("malformed knowledge base " + path.string() + ": " + e.what());
  }
  return kb_from_json(j);
}

}  // namespace mixdialog
