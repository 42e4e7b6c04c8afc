#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <utility>

#include "mixdialog/engine.hpp"

namespace mixdialog::testing {

inline const Resources& resources() {
  static const Resources r = Resources::load(MIXDIALOG_DATA_DIR);
  return r;
}

inline const KnowledgeBase& kb() { return resources().kb; }

inline Utterance user(std::string text, int turn = 2) {
  return make_utterance(Speaker::User, std::move(text), turn);
}

/// Alternating transcript starting with a system turn. Each system entry
/// carries its strategy; topics are left unset unless `label` is given.
struct Line {
  std::string text;
  std::optional<StrategyId> strategy;  // empty for user lines
};

inline Conversation script(std::initializer_list<Line> lines, const KnowledgeBase* label = nullptr) {
  Conversation conv("script");
  for (const auto& l : lines) {
    const Speaker who = l.strategy ? Speaker::System : Speaker::User;
    auto u = make_utterance(who, l.text, conv.next_turn_index(), l.strategy);
    if (label) u.topic = label_topic(u, *label);
    conv = append_turn(std::move(conv), std::move(u));
  }
  return conv;
}

/// Unique scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("mixdialog_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream(path, std::ios::binary) << contents;
}

}  // namespace mixdialog::testing
