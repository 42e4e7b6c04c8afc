#include "mixdialog/conversation_json.hpp"

namespace mixdialog {

using nlohmann::json;

json to_json(const Utterance& utt) {
  json j;
  j["speaker"] = to_string(utt.speaker);
  j["text"] = utt.text;
  j["tokens"] = utt.tokens;
  j["turn_index"] = utt.turn_index;
  j["strategy_id"] = utt.strategy ? json(to_string(*utt.strategy)) : json(nullptr);
  j["topic"] = utt.topic ? json(to_string(*utt.topic)) : json(nullptr);
  return j;
}

json to_json(const Conversation& conv) {
  json j;
  j["id"] = conv.id();
  j["utterances"] = json::array();
  for (const auto& u : conv.utterances()) j["utterances"].push_back(to_json(u));
  j["ended"] = conv.ended();
  j["end_reason"] = conv.end_reason() ? json(to_string(*conv.end_reason())) : json(nullptr);
  return j;
}

namespace {

template <typename T, typename F>
std::optional<T> optional_enum(const json& j, const char* key, F parse) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  auto v = parse(j.at(key).get<std::string>());
  if (!v) throw ParseError(std::string("unknown value for ") + key);
  return v;
}

}  // namespace

Conversation conversation_from_json(const json& j) {
  try {
    Conversation conv(j.at("id").get<std::string>());
    for (const auto& ju : j.at("utterances")) {
      auto speaker = speaker_from_string(ju.at("speaker").get<std::string>());
      if (!speaker) throw ParseError("unknown speaker");
      auto strategy = optional_enum<StrategyId>(ju, "strategy_id", strategy_from_string);
      auto topic = optional_enum<Topic>(ju, "topic", topic_from_string);
      Utterance u = make_utterance(*speaker, ju.at("text").get<std::string>(),
                                   ju.at("turn_index").get<int>(), strategy, topic);
      if (ju.contains("tokens") && ju.at("tokens").get<std::vector<std::string>>() != u.tokens) {
        throw ParseError("tokens do not match text at turn " + std::to_string(u.turn_index));
      }
      conv = append_turn(std::move(conv), std::move(u));
    }
    if (auto reason = optional_enum<EndReason>(j, "end_reason", end_reason_from_string)) {
      conv = end_conversation(std::move(conv), *reason);
    }
    return conv;
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(std::string("invalid conversation record: ") + e.what());
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed conversation record: ") + e.what());
  }
}

}  // namespace mixdialog
