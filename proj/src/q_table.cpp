#include "mixdialog/q_table.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace mixdialog {

namespace {
constexpr const char* kFormat = "mixdialog-qtable";
}

double QTable::value(const DialogState& s, StrategyId a) const {
  auto it = rows_.find(s.key());
  return it == rows_.end() ? 0.0 : it->second[index_of(a)];
}

void QTable::set(const DialogState& s, StrategyId a, double v) {
  auto [it, inserted] = rows_.try_emplace(s.key());
  if (inserted) it->second.fill(0.0);
  it->second[index_of(a)] = v;
}

double QTable::max_value(const DialogState& s, std::span<const StrategyId> actions) const {
  auto it = rows_.find(s.key());
  if (actions.empty()) {
    if (it == rows_.end()) return 0.0;
    return *std::max_element(it->second.begin(), it->second.end());
  }
  if (it == rows_.end()) return 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (auto a : actions) best = std::max(best, it->second[index_of(a)]);
  return best;
}

nlohmann::json QTable::to_json(Variant variant) const {
  nlohmann::json j;
  j["format"] = kFormat;
  j["version"] = kQTableFormatVersion;
  j["variant"] = mixdialog::to_string(variant);
  j["actions"] = nlohmann::json::array();
  for (auto s : kAllStrategies) j["actions"].push_back(mixdialog::to_string(s));
  // nlohmann::json objects keep keys sorted, so output is independent of hash order.
  j["entries"] = nlohmann::json::object();
  for (const auto& [key, row] : rows_) {
    j["entries"][DialogState::from_key(key).to_string()] = row;
  }
  return j;
}

QTable QTable::from_json(const nlohmann::json& j, Variant* variant) {
  try {
    if (j.at("format").get<std::string>() != kFormat) throw ParseError("not a Q-table file");
    const int version = j.at("version").get<int>();
    if (version != kQTableFormatVersion) {
      throw VersionMismatch("Q-table format version " + std::to_string(version) + ", expected " +
                            std::to_string(kQTableFormatVersion));
    }
    const auto actions = j.at("actions").get<std::vector<std::string>>();
    if (actions.size() != kStrategyCount) throw ParseError("Q-table action list has the wrong length");
    for (std::size_t i = 0; i < kStrategyCount; ++i) {
      if (actions[i] != mixdialog::to_string(kAllStrategies[i])) throw ParseError("Q-table action order differs");
    }
    if (variant) *variant = parse_variant(j.at("variant").get<std::string>());
    QTable q;
    for (const auto& [key, values] : j.at("entries").items()) {
      const auto row = values.get<std::vector<double>>();
      if (row.size() != kStrategyCount) throw ParseError("Q-table row for '" + key + "' has the wrong length");
      Row r{};
      for (std::size_t i = 0; i < kStrategyCount; ++i) {
        if (!std::isfinite(row[i])) throw ParseError("non-finite Q value for '" + key + "'");
        r[i] = row[i];
      }
      q.rows_[DialogState::parse(key).key()] = r;
    }
    return q;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed Q-table: ") + e.what());
  }
}

void QTable::save(const std::filesystem::path& path, Variant variant) const {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write Q-table to " + path.string());
  out << to_json(variant).dump(1) << '\n';
}

QTable QTable::load(const std::filesystem::path& path, Variant* variant) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open Q-table " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("malformed Q-table " + path.string() + ": " + e.what());
  }
  return from_json(j, variant);
}

}  // namespace mixdialog
