// Acceptance run: one PASS/FAIL line per primary criterion.
//
// Criteria listed in --known-failures may fail without failing the run;
// each such line is marked "(known)". A listed criterion that passes is
// reported as XPASS and fails the run, so the list cannot go stale.
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "mixdialog/conversation_json.hpp"
#include "mixdialog/harness.hpp"
#include "mixdialog/http_api.hpp"
#include "../unit/scripted_client.hpp"

using namespace mixdialog;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Check = std::function<Outcome()>;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int digits = 1) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

// ---------------------------------------------------------------- Q oracle

Outcome q_oracle() {
  // s0 --a0 (r=1)--> s1, s0 --a1 (r=0)--> s0, s1 --a0 (r=0)--> s0, s1 --a1 (r=2)--> s1
  const int next[2][2] = {{1, 0}, {0, 1}};
  const double reward[2][2] = {{1.0, 0.0}, {0.0, 2.0}};
  const double gamma = 0.9;

  double v[2] = {0.0, 0.0};
  double q_star[2][2] = {};
  for (int it = 0; it < 5000; ++it) {
    for (int s = 0; s < 2; ++s) {
      for (int a = 0; a < 2; ++a) q_star[s][a] = reward[s][a] + gamma * v[next[s][a]];
    }
    for (int s = 0; s < 2; ++s) v[s] = std::max(q_star[s][0], q_star[s][1]);
  }

  DialogState states[2];
  states[1].turn_bucket = TurnBucket::T4_6;
  const std::array<StrategyId, 2> actions = {StrategyId::Retrieval, StrategyId::Grounding};
  QTable q;
  const auto t0 = std::chrono::steady_clock::now();
  for (int step = 0; step < 10000; ++step) {
    const int s = (step / 2) % 2;
    const int a = step % 2;
    q_update(q, states[s], actions[a], reward[s][a], states[next[s][a]], actions, 0.5, gamma);
  }
  const double secs = seconds_since(t0);
  double worst = 0.0;
  bool policy_match = true;
  for (int s = 0; s < 2; ++s) {
    for (int a = 0; a < 2; ++a) worst = std::max(worst, std::abs(q.value(states[s], actions[a]) - q_star[s][a]));
    const int greedy = q.value(states[s], actions[0]) >= q.value(states[s], actions[1]) ? 0 : 1;
    const int best = q_star[s][0] >= q_star[s][1] ? 0 : 1;
    policy_match = policy_match && greedy == best;
  }
  return {worst < 1e-3 && policy_match && secs < 1.0,
          "max |Q - Q*| = " + fmt(worst, 6) + ", greedy policy " + (policy_match ? "matches" : "differs") + ", " +
              fmt(secs * 1000, 1) + " ms"};
}

// ----------------------------------------------------------------- metrics

int union_oracle(const std::vector<std::string>& texts) {
  std::set<std::string> words;
  for (const auto& text : texts) {
    std::string word;
    for (char ch : text + " ") {
      const auto c = static_cast<unsigned char>(ch);
      if (std::isspace(c)) {
        if (!word.empty()) words.insert(word);
        word.clear();
      } else if (std::isalnum(c)) {
        word.push_back(static_cast<char>(std::tolower(c)));
      }
    }
  }
  return static_cast<int>(words.size());
}

Conversation build(const std::vector<std::string>& texts, const std::vector<std::optional<Topic>>& topics) {
  Conversation conv("acceptance");
  for (std::size_t i = 0; i < texts.size(); ++i) {
    const bool system = i % 2 == 0;
    conv = append_turn(conv, make_utterance(system ? Speaker::System : Speaker::User, texts[i],
                                            static_cast<int>(i) + 1,
                                            system ? std::optional(StrategyId::Retrieval) : std::nullopt,
                                            i < topics.size() ? topics[i] : std::nullopt));
  }
  return conv;
}

Outcome metrics() {
  std::mt19937 rng(424242);
  const std::vector<std::string> vocab = {"I",    "like",  "Movies", "superhero", "Spider-man", "don't", "Kids!",
                                          "the",  "2005",  "film.",  "Yes.",      "am",         "Cool",  "movies",
                                          "LIKE", "hero,", "a",      "b",         "c",          "d"};
  int info_ok = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> texts;
    const int turns = 1 + static_cast<int>(rng() % 20);
    for (int t = 0; t < turns; ++t) {
      std::string text;
      const int words = static_cast<int>(rng() % 9);
      for (int w = 0; w < words; ++w) text += vocab[rng() % vocab.size()] + " ";
      texts.push_back(text);
    }
    if (information_gain(build(texts, {})) == union_oracle(texts)) ++info_ok;
  }

  auto run_of = [](int n) {
    std::vector<std::string> texts(n + 2, "x");
    std::vector<std::optional<Topic>> topics(n + 2, Topic::Superheroes);
    topics[0] = Topic::Social;
    topics[n + 1] = Topic::Other;
    return conversation_depth(build(texts, topics));
  };
  const DepthResult nine = run_of(9), ten = run_of(10), eleven = run_of(11);
  const bool depth_ok = !nine.deep && nine.max_run == 9 && ten.deep && ten.max_run == 10 && eleven.deep;
  return {info_ok == 50 && depth_ok, "InfoGain " + std::to_string(info_ok) + "/50 match the set-union oracle; depth " +
                                         (depth_ok ? "9 -> shallow, 10 -> deep" : "boundary wrong")};
}

// -------------------------------------------------------------- experiment

struct Experiment {
  ExperimentConfig config;
  EvaluationReport report;
  double seconds = 0.0;

  const EvaluationRow& row(Variant v) const {
    for (const auto& r : report.rows) {
      if (r.variant == v) return r;
    }
    throw ValidationError("missing row");
  }
};

Outcome table2(const Experiment& e) {
  const auto& tg = e.row(Variant::TaskGlobal);
  const auto& ml = e.row(Variant::MixLocal);
  const auto& mg = e.row(Variant::MixGlobal);
  const double gap = mg.task_success_rate - tg.task_success_rate;
  const bool success_ok = gap >= 20.0;
  const bool len_ok = mg.mean_conv_len > ml.mean_conv_len && ml.mean_conv_len > tg.mean_conv_len;
  const bool info_ok = mg.mean_info_gain > ml.mean_info_gain && ml.mean_info_gain > tg.mean_info_gain;
  const bool time_ok = e.seconds < 15 * 60;
  std::string d = "success MG-TG " + fmt(gap) + "pp (" + fmt(mg.task_success_rate) + " vs " +
                  fmt(tg.task_success_rate) + ")" + (success_ok ? "" : " [short]") + "; ConvLen MG/ML/TG " +
                  fmt(mg.mean_conv_len) + "/" + fmt(ml.mean_conv_len) + "/" + fmt(tg.mean_conv_len) +
                  (len_ok ? "" : " [order broken]") + "; InfoGain " + fmt(mg.mean_info_gain) + "/" +
                  fmt(ml.mean_info_gain) + "/" + fmt(tg.mean_info_gain) + (info_ok ? "" : " [order broken]") + "; " +
                  fmt(e.seconds, 0) + " s";
  return {success_ok && len_ok && info_ok && time_ok, d};
}

Outcome convergence(const Experiment& e) {
  const auto& tg = e.row(Variant::TaskGlobal);
  const auto& ml = e.row(Variant::MixLocal);
  const auto& mg = e.row(Variant::MixGlobal);
  const bool all = tg.converged && ml.converged && mg.converged;
  const bool order = tg.episodes_to_convergence < ml.episodes_to_convergence &&
                     ml.episodes_to_convergence < mg.episodes_to_convergence;
  auto show = [](const EvaluationRow& r) {
    return (r.converged ? "" : ">") + std::to_string(r.episodes_to_convergence);
  };
  return {all && order, "episodes TG/ML/MG " + show(tg) + "/" + show(ml) + "/" + show(mg) +
                            (all ? "" : " (not all converged)")};
}

Outcome constraints(const Experiment& e) {
  const auto& mg = e.row(Variant::MixGlobal);
  return {mg.episodes == 500 && mg.repeat_pair_rate < 5.0,
          fmt(mg.repeat_pair_rate, 2) + "% of MixGlobal adjacent system turns repeat a strategy over " +
              std::to_string(mg.episodes) + " episodes"};
}

Outcome task_global(const Experiment& e, const Resources& res) {
  const std::string csv = to_csv(e.report);
  std::istringstream lines(csv);
  std::string line, depth_field;
  while (std::getline(lines, line)) {
    if (line.rfind("TaskGlobal,", 0) != 0) continue;
    std::istringstream fields(line);
    for (int i = 0; i < 4; ++i) std::getline(fields, depth_field, ',');
  }
  ExperimentConfig c = e.config;
  c.variant = Variant::TaskGlobal;
  const QTable table = QTable::load(c.output_dir / "TaskGlobal.qtable.json");
  std::vector<Conversation> transcripts;
  evaluate(res, table, c, c.evaluation_episodes, &transcripts);
  int worst_tasks = 0;
  bool only_tasks = true;
  for (const auto& conv : transcripts) {
    int tasks = 0;
    for (const auto& u : conv.utterances()) {
      if (u.speaker != Speaker::System || u.turn_index == 1) continue;
      if (is_task(*u.strategy)) ++tasks;
      else only_tasks = false;
    }
    worst_tasks = std::max(worst_tasks, tasks);
  }
  const bool ok = depth_field == "NA" && worst_tasks <= 8 && only_tasks &&
                  e.row(Variant::TaskGlobal).max_task_responses <= 8;
  return {ok, "ConvDepth column '" + depth_field + "'; at most " + std::to_string(worst_tasks) +
                  " task responses after the opener in " + std::to_string(transcripts.size()) + " conversations" +
                  (only_tasks ? "" : "; non-task turn found")};
}

// ------------------------------------------------------------ determinism

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Reruns the full compare and checks its CSV against the first run's.
Outcome determinism(const Resources& res, const ExperimentConfig& first, const std::filesystem::path& root) {
  const std::string a = slurp(first.output_dir / "compare.csv");
  ExperimentConfig c = first;
  c.output_dir = root / "compare_again";
  compare(res, c);
  const std::string b = slurp(c.output_dir / "compare.csv");
  const bool same = !a.empty() && a == b;
  return {same, std::string("compare.csv ") + (same ? "byte-identical" : "differs") + " across two full runs (" +
                    std::to_string(a.size()) + " bytes)"};
}

// ---------------------------------------------------------------- service

Outcome service_round_trip(const Resources& res, const std::filesystem::path& model_dir,
                           const std::filesystem::path& root) {
  const auto log = root / "service" / "sessions.jsonl";
  std::filesystem::remove_all(log.parent_path());
  ChatService service(res, load_models(model_dir), log);
  httplib::Server server;
  register_routes(server, service);
  const int port = server.bind_to_any_port("127.0.0.1");
  if (port <= 0) return {false, "cannot bind a port"};
  std::thread worker([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  Outcome out;
  try {
    httplib::Client client("127.0.0.1", port);
    auto call = [&](const std::string& path, const json& body) {
      auto r = client.Post(path, body.dump(), "application/json");
      if (!r) throw ValidationError("no response from " + path);
      json j = json::parse(r->body);
      if (r->status >= 300) throw ValidationError(path + " -> " + std::to_string(r->status) + " " + r->body);
      return j;
    };
    const json created = call("/sessions", {{"variant", "MixGlobal"}});
    const std::string id = created.at("session_id");
    std::string last(to_string(kOpenerStrategy));
    std::set<std::string> tasks;
    bool complete = false;
    int messages = 0;
    for (int turn = 2; turn < 80 && !complete; turn += 2) {
      const json reply = call("/sessions/" + id + "/messages", {{"text", testing::fan_answer(last, turn)}});
      ++messages;
      last = reply.at("strategy_id");
      if (reply.at("source") == "task") tasks.insert(last);
      complete = reply.at("task_complete");
    }
    const json summary = call("/sessions/" + id + "/close", {{"rating", 5}});
    auto got = client.Get("/sessions/" + id);
    const json live = got ? json::parse(got->body) : json();
    const auto replayed = replay_log(log);
    const bool replay_ok = replayed.count(id) && live.contains("conversation") &&
                           to_json(replayed.at(id).conversation).dump() == live["conversation"].dump() &&
                           replayed.at(id).rating == 5 && replayed.at(id).closed;
    out.pass = complete && tasks.size() == kTaskStrategyCount && summary.at("rating") == 5 && replay_ok;
    out.detail = std::to_string(tasks.size()) + "/8 task templates in " + std::to_string(messages) +
                 " messages, task_complete=" + (complete ? "true" : "false") + ", rating " +
                 summary.at("rating").dump() + ", log replay " + (replay_ok ? "identical" : "differs");
  } catch (const std::exception& e) {
    out = {false, e.what()};
  }
  server.stop();
  worker.join();
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::string out_dir = "acceptance_out";
  std::string config_path;
  std::string known_path;
  bool quick = false;
  app.add_option("-o,--out", out_dir, "Scratch directory");
  app.add_option("-c,--config", config_path, "Experiment config (defaults to the built-in one)");
  app.add_option("--known-failures", known_path, "File listing criteria that are expected to fail");
  app.add_flag("--quick", quick, "Skip the long experiment-based criteria");
  CLI11_PARSE(app, argc, argv);

  std::set<std::string> known;
  if (!known_path.empty()) {
    std::ifstream in(known_path);
    std::string line;
    while (std::getline(in, line)) {
      const auto end = line.find_first_of(" \t#");
      const std::string key = line.substr(0, end);
      if (!key.empty()) known.insert(key);
    }
  }

  int failures = 0;
  auto report = [&](const std::string& key, const std::string& title, const Check& check) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const bool expected_fail = known.count(key) > 0;
    std::string tag = o.pass ? "PASS" : "FAIL";
    if (o.pass && expected_fail) {
      tag = "XPASS";
      ++failures;
    } else if (!o.pass && !expected_fail) {
      ++failures;
    }
    std::cout << tag << (expected_fail && !o.pass ? " (known)" : "") << "  " << key << "  " << title << ": "
              << o.detail << std::endl;
  };

  const std::filesystem::path root = out_dir;
  std::filesystem::create_directories(root);
  ExperimentConfig config = config_path.empty() ? ExperimentConfig{} : ExperimentConfig::load(config_path);
  config.output_dir = root / "compare";
  const Resources res = Resources::load(config.data_dir);

  report("q-oracle", "Q-learning matches value iteration", q_oracle);
  report("metrics", "InfoGain and ConvDepth exactness", metrics);

  if (!quick) {
    Experiment e;
    e.config = config;
    const auto t0 = std::chrono::steady_clock::now();
    std::optional<std::string> setup_error;
    try {
      e.report = compare(res, config);
    } catch (const std::exception& ex) {
      setup_error = ex.what();
    }
    e.seconds = seconds_since(t0);
    auto guarded = [&](auto fn) -> Check {
      return [&, fn]() -> Outcome {
        if (setup_error) return {false, "compare failed: " + *setup_error};
        return fn();
      };
    };
    report("table2", "Table 2 orderings", guarded([&] { return table2(e); }));
    report("convergence", "Convergence ordering", guarded([&] { return convergence(e); }));
    report("constraints", "Constraint enforcement", guarded([&] { return constraints(e); }));
    report("taskglobal", "TaskGlobal NA depth and task cap", guarded([&] { return task_global(e, res); }));
    report("determinism", "End-to-end determinism", guarded([&] { return determinism(res, config, root); }));
    report("service", "Service round trip",
           guarded([&] { return service_round_trip(res, config.output_dir, root); }));
  }

  std::cout << (failures == 0 ? "acceptance: ok" : "acceptance: " + std::to_string(failures) + " unexpected")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
