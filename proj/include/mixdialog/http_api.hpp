#pragma once

#include <string>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "mixdialog/service.hpp"

namespace mixdialog {

/// HTTP status for a library error code (500 for anything unexpected).
int http_status(const std::string& error_code);

nlohmann::json to_json(const ChatReply& reply);
nlohmann::json to_json(const SessionSummary& summary);

/// Installs the JSON routes on `server`:
///   POST /sessions                {variant}  -> {session_id, opener}
///   POST /sessions/{id}/messages  {text}     -> reply
///   POST /sessions/{id}/close     {rating?}  -> summary
///   GET  /sessions/{id}                      -> session record
/// Errors come back as {code, message}. `allow_origin` is echoed in CORS
/// headers; empty disables them.
void register_routes(httplib::Server& server, ChatService& service, std::string allow_origin = "*");

}  // namespace mixdialog
