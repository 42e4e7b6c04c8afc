#pragma once

#include <nlohmann/json.hpp>

#include "mixdialog/core.hpp"

namespace mixdialog {

/// One JSON object per conversation, field names matching the C++ members.
/// `end_reason` is null while the conversation is open.
nlohmann::json to_json(const Conversation& conv);
nlohmann::json to_json(const Utterance& utt);

/// Rebuilds through `append_turn`, so a record that violates the transcript
/// invariants is rejected with ParseError.
Conversation conversation_from_json(const nlohmann::json& j);

}  // namespace mixdialog
