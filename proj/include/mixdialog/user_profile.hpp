#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mixdialog/core.hpp"
#include "mixdialog/understanding.hpp"

namespace mixdialog {

struct EntityMention {
  std::string entity_id;
  EntityKind kind;
  int count = 0;
  int last_turn = 0;

  bool operator==(const EntityMention&) const = default;
};

/// What the user has engaged with so far. Updated once per user turn.
struct UserProfile {
  // User turns spent on each topic; Other is never counted.
  std::array<int, kTopicCount> engaged_topics{};
  std::vector<EntityMention> mentioned_entities;  // first-mention order

  int engagement(Topic t) const { return engaged_topics[static_cast<std::size_t>(t)]; }

  /// Most recently mentioned entity of `kind`, ties to the earliest listed.
  const EntityMention* latest(EntityKind kind) const;

  bool operator==(const UserProfile&) const = default;
};

UserProfile update_profile(UserProfile profile, const Utterance& user_turn, const UnderstandingResult& nlu);

}  // namespace mixdialog
