#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "mixdialog/core.hpp"
#include "mixdialog/dialog_state.hpp"

namespace mixdialog {

inline constexpr int kQTableFormatVersion = 1;

/// State-action values. Unseen pairs read as 0 and reading never inserts.
class QTable {
 public:
  using Row = std::array<double, kStrategyCount>;

  double value(const DialogState& s, StrategyId a) const;
  void set(const DialogState& s, StrategyId a, double v);

  /// Max over `actions` (all strategies when empty).
  double max_value(const DialogState& s, std::span<const StrategyId> actions = {}) const;

  std::size_t state_count() const noexcept { return rows_.size(); }
  const std::unordered_map<std::uint64_t, Row>& rows() const noexcept { return rows_; }

  bool operator==(const QTable&) const = default;

  /// {"format", "version", "variant", "actions", "entries": {state: [12 values]}}
  nlohmann::json to_json(Variant variant) const;
  /// Throws VersionMismatch on a different format version, ParseError otherwise.
  static QTable from_json(const nlohmann::json& j, Variant* variant = nullptr);

  void save(const std::filesystem::path& path, Variant variant) const;
  static QTable load(const std::filesystem::path& path, Variant* variant = nullptr);

 private:
  std::unordered_map<std::uint64_t, Row> rows_;
};

}  // namespace mixdialog
