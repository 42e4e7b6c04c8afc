#include "mixdialog/http_api.hpp"

#include <map>

namespace mixdialog {

int http_status(const std::string& error_code) {
  static const std::map<std::string, int> table = {
      {"SessionNotFound", 404},  {"SessionClosed", 409},    {"ConversationComplete", 409},
      {"EmptyMessage", 400},     {"RatingOutOfRange", 400}, {"UnknownVariant", 400},
      {"ValidationError", 400},  {"BadRequest", 400},
  };
  const auto it = table.find(error_code);
  return it == table.end() ? 500 : it->second;
}

nlohmann::json to_json(const ChatReply& reply) {
  return {{"text", reply.text},
          {"strategy_id", std::string(to_string(reply.strategy))},
          {"source", std::string(to_string(reply.source))},
          {"task_complete", reply.task_complete},
          {"q_value", reply.q_value}};
}

nlohmann::json to_json(const SessionSummary& summary) {
  return {{"conv_len", summary.conv_len},
          {"info_gain", summary.info_gain},
          {"task_success", summary.task_success},
          {"rating", summary.rating ? nlohmann::json(*summary.rating) : nlohmann::json(nullptr)}};
}

namespace {

void send_json(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json; charset=utf-8");
}

void send_error(httplib::Response& res, const std::string& code, const std::string& message) {
  send_json(res, http_status(code), {{"code", code}, {"message", message}});
}

// An empty body reads as {} so optional fields can be omitted entirely.
nlohmann::json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return nlohmann::json::object();
  nlohmann::json j = nlohmann::json::parse(req.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ValidationError("request body must be a JSON object");
  return j;
}

template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const Error& e) {
      send_error(res, e.code(), e.what());
    } catch (const nlohmann::json::exception& e) {
      send_error(res, "BadRequest", e.what());
    } catch (const std::exception& e) {
      send_error(res, "InternalError", e.what());
    }
  };
}

}  // namespace

void register_routes(httplib::Server& server, ChatService& service, std::string allow_origin) {
  if (!allow_origin.empty()) {
    server.set_default_headers({{"Access-Control-Allow-Origin", allow_origin},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
    server.Options(R"(/sessions.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  }

  server.Post("/sessions", guarded([&service](const httplib::Request& req, httplib::Response& res) {
                const nlohmann::json body = parse_body(req);
                const std::string variant = body.value("variant", std::string("MixGlobal"));
                const CreatedSession s = service.create_session(variant);
                send_json(res, 201, {{"session_id", s.session_id}, {"opener", s.opener}});
              }));

  server.Post(R"(/sessions/([0-9a-f]+)/messages)",
              guarded([&service](const httplib::Request& req, httplib::Response& res) {
                const nlohmann::json body = parse_body(req);
                if (!body.contains("text") || !body["text"].is_string()) {
                  throw ValidationError("body needs a string field \"text\"");
                }
                send_json(res, 200, to_json(service.post_message(req.matches[1], body["text"].get<std::string>())));
              }));

  server.Post(R"(/sessions/([0-9a-f]+)/close)", guarded([&service](const httplib::Request& req, httplib::Response& res) {
                const nlohmann::json body = parse_body(req);
                std::optional<int> rating;
                if (body.contains("rating") && !body["rating"].is_null()) {
                  if (!body["rating"].is_number_integer()) throw RatingOutOfRange("rating must be an integer 1-5");
                  rating = body["rating"].get<int>();
                }
                send_json(res, 200, to_json(service.close_session(req.matches[1], rating)));
              }));

  server.Get(R"(/sessions/([0-9a-f]+))", guarded([&service](const httplib::Request& req, httplib::Response& res) {
               send_json(res, 200, to_json(service.snapshot(req.matches[1])));
             }));

  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    const int status = res.status;
    send_json(res, status, {{"code", status == 404 ? "NotFound" : "BadRequest"}, {"message", "no such route"}});
  });
}

}  // namespace mixdialog
