#pragma once

#include <filesystem>
#include <functional>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

#include <nlohmann/json.hpp>

#include "mixdialog/engine.hpp"
#include "mixdialog/q_table.hpp"

namespace mixdialog {

struct ChatReply {
  std::string text;
  StrategyId strategy;
  ResponseSource source;
  bool task_complete = false;
  double q_value = 0.0;  // value of the chosen action, for debug views
};

struct SessionSummary {
  int conv_len = 0;
  int info_gain = 0;
  bool task_success = false;
  std::optional<int> rating;
};

struct CreatedSession {
  std::string session_id;
  std::string opener;
};

/// What the log holds about one session: the latest record written for it.
struct SessionRecord {
  std::string session_id;
  Variant variant = Variant::MixGlobal;
  std::string created_at;
  bool closed = false;
  std::optional<int> rating;
  Conversation conversation;
};

nlohmann::json to_json(const SessionRecord& record);
SessionRecord session_record_from_json(const nlohmann::json& j);

/// Reads an append-only session log; later lines for a session replace
/// earlier ones. Throws ParseError naming the offending line.
std::map<std::string, SessionRecord> replay_log(const std::filesystem::path& path);

/// Live chat sessions over frozen Q tables. Every state change appends the
/// session's full record to the log; closing a session also fsyncs it.
/// Thread-safe: calls on different sessions run concurrently, calls on the
/// same session are serialized.
class ChatService {
 public:
  /// Variants missing from `models` are served with an empty table, which
  /// makes selection fall back to the fixed strategy order.
  ChatService(const Resources& resources, std::map<Variant, QTable> models, std::filesystem::path log_path);
  ~ChatService();

  ChatService(const ChatService&) = delete;
  ChatService& operator=(const ChatService&) = delete;

  /// Throws UnknownVariant.
  CreatedSession create_session(std::string_view variant);
  /// Throws SessionNotFound, SessionClosed, EmptyMessage, ConversationComplete.
  ChatReply post_message(const std::string& session_id, const std::string& text);
  /// Throws SessionNotFound, SessionClosed, RatingOutOfRange.
  SessionSummary close_session(const std::string& session_id, std::optional<int> rating);
  /// Throws SessionNotFound.
  SessionRecord snapshot(const std::string& session_id) const;

  bool has_model(Variant v) const { return models_.count(v) > 0; }
  /// The table served for `v`; the empty table when none was loaded.
  const QTable& model(Variant v) const;

 private:
  struct Session {
    std::mutex mutex;
    SessionRecord record;
    DialogContext context;
  };

  std::shared_ptr<Session> find(const std::string& session_id) const;
  void persist(const SessionRecord& record, bool sync);
  std::string new_session_id();

  const Resources* resources_;
  std::map<Variant, QTable> models_;
  std::map<Variant, DialogEngine> engines_;
  QTable empty_;

  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;

  std::mutex log_mutex_;
  std::filesystem::path log_path_;
  int log_fd_ = -1;

  std::mutex id_mutex_;
  std::uint64_t id_state_;
};

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path data_dir = MIXDIALOG_DATA_DIR;
  std::filesystem::path model_dir = "models";
  std::filesystem::path log_path = "sessions.jsonl";
  std::string allow_origin = "*";

  /// Unknown keys and wrong types throw ConfigError; relative paths
  /// resolve against the file's directory.
  static ServiceConfig load(const std::filesystem::path& path);
  static ServiceConfig from_json(const nlohmann::json& j);

  /// MIXDIALOG_PORT, MIXDIALOG_MODEL_PATH and MIXDIALOG_LOG_PATH override
  /// the matching fields. `getenv` is injectable for tests.
  void apply_env(const std::function<const char*(const char*)>& getenv);

  void validate() const;
};

/// Loads `<model_dir>/<Variant>.qtable.json` for every variant that has one.
/// Throws ParseError / VersionMismatch for a file that exists but is bad.
std::map<Variant, QTable> load_models(const std::filesystem::path& model_dir);

}  // namespace mixdialog
