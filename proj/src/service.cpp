#include "mixdialog/service.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <ctime>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>

#include "mixdialog/conversation_json.hpp"
#include "mixdialog/simulator.hpp"

namespace mixdialog {

nlohmann::json to_json(const SessionRecord& record) {
  nlohmann::json j;
  j["session_id"] = record.session_id;
  j["variant"] = std::string(to_string(record.variant));
  j["created_at"] = record.created_at;
  j["closed"] = record.closed;
  j["rating"] = record.rating ? nlohmann::json(*record.rating) : nlohmann::json(nullptr);
  j["conversation"] = to_json(record.conversation);
  return j;
}

SessionRecord session_record_from_json(const nlohmann::json& j) {
  try {
    SessionRecord r;
    r.session_id = j.at("session_id").get<std::string>();
    r.variant = parse_variant(j.at("variant").get<std::string>());
    r.created_at = j.at("created_at").get<std::string>();
    r.closed = j.at("closed").get<bool>();
    if (!j.at("rating").is_null()) r.rating = j.at("rating").get<int>();
    r.conversation = conversation_from_json(j.at("conversation"));
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad session record: ") + e.what());
  }
}

std::map<std::string, SessionRecord> replay_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open session log " + path.string());
  std::map<std::string, SessionRecord> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      SessionRecord r = session_record_from_json(nlohmann::json::parse(line));
      out.insert_or_assign(r.session_id, std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::map<Variant, QTable> load_models(const std::filesystem::path& model_dir) {
  std::map<Variant, QTable> out;
  for (Variant v : kAllVariants) {
    const auto path = model_dir / (std::string(to_string(v)) + ".qtable.json");
    if (!std::filesystem::exists(path)) continue;
    Variant stored = v;
    QTable q = QTable::load(path, &stored);
    if (stored != v) throw ParseError(path.string() + " holds a " + std::string(to_string(stored)) + " table");
    out.emplace(v, std::move(q));
  }
  return out;
}

namespace {

void read_string(const nlohmann::json& j, const char* key, std::string& out) {
  if (!j.contains(key)) return;
  if (!j[key].is_string()) throw ConfigError(std::string("'") + key + "' must be a string");
  out = j[key].get<std::string>();
}

int parse_port(const std::string& text) {
  std::size_t used = 0;
  int port = -1;
  try {
    port = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) throw ConfigError("port must be an integer, got '" + text + "'");
  return port;
}

}  // namespace

ServiceConfig ServiceConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("service config must be an object");
  static const std::set<std::string> known = {"host", "port", "data_dir", "model_dir", "log_path", "allow_origin"};
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) throw ConfigError("unknown key '" + item.key() + "' in service config");
  }
  ServiceConfig c;
  read_string(j, "host", c.host);
  read_string(j, "allow_origin", c.allow_origin);
  if (j.contains("port")) {
    if (!j["port"].is_number_integer()) throw ConfigError("'port' must be an integer");
    c.port = j["port"].get<int>();
  }
  for (auto [key, field] : {std::pair{"data_dir", &c.data_dir}, std::pair{"model_dir", &c.model_dir},
                            std::pair{"log_path", &c.log_path}}) {
    std::string text;
    if (!j.contains(key)) continue;
    read_string(j, key, text);
    *field = text;
  }
  return c;
}

ServiceConfig ServiceConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open service config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("malformed service config " + path.string() + ": " + e.what());
  }
  ServiceConfig c = from_json(j);
  const auto base = path.parent_path();
  for (auto [key, field] : {std::pair{"data_dir", &c.data_dir}, std::pair{"model_dir", &c.model_dir},
                            std::pair{"log_path", &c.log_path}}) {
    if (j.contains(key) && field->is_relative()) *field = base / *field;
  }
  return c;
}

void ServiceConfig::apply_env(const std::function<const char*(const char*)>& getenv) {
  if (const char* v = getenv("MIXDIALOG_PORT"); v && *v) port = parse_port(v);
  if (const char* v = getenv("MIXDIALOG_MODEL_PATH"); v && *v) model_dir = v;
  if (const char* v = getenv("MIXDIALOG_LOG_PATH"); v && *v) log_path = v;
}

void ServiceConfig::validate() const {
  if (port < 0 || port > 65535) throw ConfigError("port must lie in [0, 65535]");
  if (host.empty()) throw ConfigError("host must not be empty");
  if (log_path.empty()) throw ConfigError("log_path must not be empty");
}

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

bool blank(const std::string& text) {
  return text.find_first_not_of(" \t\r\n\f\v") == std::string::npos;
}

}  // namespace

ChatService::ChatService(const Resources& resources, std::map<Variant, QTable> models, std::filesystem::path log_path)
    : resources_(&resources), models_(std::move(models)), log_path_(std::move(log_path)) {
  for (Variant v : kAllVariants) engines_.emplace(v, DialogEngine(resources, v));
  if (log_path_.has_parent_path()) std::filesystem::create_directories(log_path_.parent_path());
  log_fd_ = ::open(log_path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (log_fd_ < 0) throw ConfigError("cannot open session log " + log_path_.string() + ": " + std::strerror(errno));
  std::random_device rd;
  id_state_ = (static_cast<std::uint64_t>(rd()) << 32) ^ rd() ^
              static_cast<std::uint64_t>(std::chrono::steady_clock::now().time_since_epoch().count());
}

ChatService::~ChatService() {
  if (log_fd_ >= 0) {
    ::fsync(log_fd_);
    ::close(log_fd_);
  }
}

std::string ChatService::new_session_id() {
  std::lock_guard lock(id_mutex_);
  std::mt19937_64 rng(mix_seed(id_state_++, 0x73657373));
  std::ostringstream os;
  os << std::hex << std::setfill('0') << std::setw(16) << rng() << std::setw(16) << rng();
  return os.str();
}

const QTable& ChatService::model(Variant v) const {
  const auto it = models_.find(v);
  return it == models_.end() ? empty_ : it->second;
}

std::shared_ptr<ChatService::Session> ChatService::find(const std::string& session_id) const {
  std::shared_lock lock(sessions_mutex_);
  const auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw SessionNotFound("no session " + session_id);
  return it->second;
}

void ChatService::persist(const SessionRecord& record, bool sync) {
  const std::string line = to_json(record).dump() + "\n";
  std::lock_guard lock(log_mutex_);
  std::size_t done = 0;
  while (done < line.size()) {
    const ssize_t n = ::write(log_fd_, line.data() + done, line.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw PersistenceError("session log write failed: " + std::string(std::strerror(errno)));
    }
    done += static_cast<std::size_t>(n);
  }
  if (sync && ::fsync(log_fd_) != 0) throw PersistenceError("session log fsync failed: " + std::string(std::strerror(errno)));
}

CreatedSession ChatService::create_session(std::string_view variant) {
  const Variant v = parse_variant(variant);
  auto session = std::make_shared<Session>();
  std::string id;
  {
    std::unique_lock lock(sessions_mutex_);
    do {
      id = new_session_id();
    } while (sessions_.count(id));
    sessions_.emplace(id, session);
  }
  std::lock_guard lock(session->mutex);
  session->context = engines_.at(v).start(id);
  session->record.session_id = id;
  session->record.variant = v;
  session->record.created_at = utc_now();
  session->record.conversation = session->context.conversation;
  persist(session->record, false);
  return {id, session->context.conversation.back().text};
}

ChatReply ChatService::post_message(const std::string& session_id, const std::string& text) {
  auto session = find(session_id);
  std::lock_guard lock(session->mutex);
  if (session->record.closed) throw SessionClosed("session " + session_id + " is closed");
  if (blank(text)) throw EmptyMessage("message text is empty");

  const DialogEngine& engine = engines_.at(session->record.variant);
  const QTable& q = model(session->record.variant);

  // Work on a copy so a failed turn leaves the session untouched.
  DialogContext ctx = session->context;
  engine.observe_user(ctx, text);
  TurnPlan plan = engine.plan(ctx);
  if (plan.candidates.empty()) throw ConversationComplete("nothing left to say in session " + session_id);
  std::mt19937_64 unused_rng(0);
  const std::size_t idx = select_action(q, plan.state, plan.candidates, 0.0, unused_rng);
  const ResponseCandidate chosen = plan.candidates[idx];
  const double value = q.value(plan.state, chosen.strategy);
  engine.commit(ctx, chosen);

  session->context = std::move(ctx);
  session->record.conversation = session->context.conversation;
  persist(session->record, false);
  return {chosen.text, chosen.strategy, chosen.source, session->context.progress.task_success(), value};
}

SessionSummary ChatService::close_session(const std::string& session_id, std::optional<int> rating) {
  auto session = find(session_id);
  std::lock_guard lock(session->mutex);
  if (session->record.closed) throw SessionClosed("session " + session_id + " is already closed");
  if (rating && (*rating < 1 || *rating > 5)) throw RatingOutOfRange("rating must be between 1 and 5");

  SessionRecord record = session->record;
  const bool success = session->context.progress.task_success();
  record.conversation =
      end_conversation(session->context.conversation, success ? EndReason::TaskComplete : EndReason::UserQuit);
  record.closed = true;
  record.rating = rating;
  persist(record, true);
  session->record = std::move(record);

  SessionSummary s;
  s.conv_len = static_cast<int>(session->record.conversation.size());
  s.info_gain = information_gain(session->record.conversation);
  s.task_success = success;
  s.rating = rating;
  return s;
}

SessionRecord ChatService::snapshot(const std::string& session_id) const {
  auto session = find(session_id);
  std::lock_guard lock(session->mutex);
  return session->record;
}

}  // namespace mixdialog
