#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mixdialog/core.hpp"

namespace mixdialog {

enum class ResponseSource : std::uint8_t { Task, NonTask };

std::string_view to_string(ResponseSource s) noexcept;

struct ResponseCandidate {
  std::string text;
  StrategyId strategy;
  ResponseSource source;
  std::vector<std::string> entity_ids;  // KB entities the text refers to
  // Gated task template whose gate opened on the latest user turn.
  bool precondition_just_met = false;
  // False only for a task template offered outside its gating order.
  bool prerequisites_met = true;

  bool operator==(const ResponseCandidate&) const = default;
};

}  // namespace mixdialog
