#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace mixdialog {

enum class EntityKind : std::uint8_t { Superhero, Movie };

std::string_view to_string(EntityKind k) noexcept;

struct Hero {
  std::string id;
  std::string name;
  std::string real_name;
  std::string eye_color;
  std::string origin;  // verb phrase, e.g. "got bitten by a radioactive spider"
  std::vector<std::string> aliases;
};

struct Movie {
  std::string id;
  std::string title;
  int year = 0;
  std::vector<std::string> related_hero_ids;
  bool is_promoted = false;
  bool is_disney = false;
  std::vector<std::string> detail_snippets;
  std::vector<std::string> aliases;
};

/// A lowercased surface form and the entity it names.
struct SurfaceForm {
  std::string text;
  std::string entity_id;  // "hero:<id>" or "movie:<id>"
  EntityKind kind;
};

/// Read-only entity lookup. The offline knowledge base implements it; a
/// remote knowledge-graph client could be slotted in behind the same calls.
class EntityLookup {
 public:
  virtual ~EntityLookup() = default;
  virtual const std::vector<SurfaceForm>& surface_forms() const = 0;
  virtual const Hero* find_hero(std::string_view entity_id) const = 0;
  virtual const Movie* find_movie(std::string_view entity_id) const = 0;
};

std::string hero_entity_id(std::string_view hero_id);
std::string movie_entity_id(std::string_view movie_id);

class KnowledgeBase final : public EntityLookup {
 public:
  /// Validates: unique ids, exactly one promoted movie, every related hero
  /// resolves. Throws ValidationError naming the offending record.
  KnowledgeBase(std::vector<Hero> heroes, std::vector<Movie> movies);

  const std::vector<Hero>& heroes() const noexcept { return heroes_; }
  const std::vector<Movie>& movies() const noexcept { return movies_; }
  const Movie& promoted_movie() const { return movies_[promoted_]; }

  /// First hero listed for the promoted movie; the system's own favorite.
  const Hero& promoted_hero() const;

  const std::vector<SurfaceForm>& surface_forms() const override { return surfaces_; }
  const Hero* find_hero(std::string_view entity_id) const override;
  const Movie* find_movie(std::string_view entity_id) const override;

  /// First non-promoted movie (file order) featuring the hero.
  const Movie* movie_for_hero(std::string_view hero_entity) const;

 private:
  std::vector<Hero> heroes_;
  std::vector<Movie> movies_;
  std::size_t promoted_ = 0;
  std::vector<SurfaceForm> surfaces_;  // sorted longest first
  std::map<std::string, std::size_t, std::less<>> hero_index_;
  std::map<std::string, std::size_t, std::less<>> movie_index_;
};

/// Errors: ParseError (missing file, malformed JSON, missing fields);
/// ValidationError (schema-valid but inconsistent data).
KnowledgeBase load_kb(const std::filesystem::path& path);
KnowledgeBase kb_from_json(const nlohmann::json& j);

}  // namespace mixdialog
