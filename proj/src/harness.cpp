#include "mixdialog/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

namespace mixdialog {

using nlohmann::json;

namespace {

constexpr std::uint64_t kTrainPersonaStream = 0x7261696e;  // "rain"
constexpr std::uint64_t kTrainPolicyStream = 0x706f6c69;
constexpr std::uint64_t kEvalPersonaStream = 0x6576616c;

void reject_unknown(const json& j, const char* where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& item : j.items()) {
    const bool known =
        std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return item.key() == k; });
    if (!known) throw ConfigError("unknown key '" + item.key() + "' in " + where);
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
  policy.validate();
  personas.validate();
  if (convergence.window == 0) throw ConfigError("convergence window must be positive");
  if (!(convergence.threshold > 0.0)) throw ConfigError("convergence threshold must be positive");
  if (episode_budget < convergence.window) throw ConfigError("episode_budget must be at least the convergence window");
  if (evaluation_episodes == 0) throw ConfigError("evaluation_episodes must be positive");
}

json ExperimentConfig::to_json() const {
  return json{
      {"variant", std::string(to_string(variant))},
      {"episode_budget", episode_budget},
      {"convergence",
       {{"window", convergence.window},
        {"threshold", convergence.threshold},
        {"statistic", std::string(mixdialog::to_string(convergence.statistic))}}},
      {"seed", seed},
      {"evaluation_seed", evaluation_seed},
      {"evaluation_episodes", evaluation_episodes},
      {"policy",
       {{"gamma", policy.gamma},
        {"alpha", policy.alpha},
        {"alpha_decay_visits", policy.alpha_decay_visits},
        {"epsilon",
         {{"start", policy.epsilon.start}, {"end", policy.epsilon.end}, {"decay_fraction", policy.epsilon.decay_fraction}}},
        {"constraint_mode", policy.constraint_mode == ConstraintMode::Mask ? "mask" : "penalty"},
        {"penalties",
         {{"repeat_last", policy.penalties.repeat_last},
          {"overused_nontask", policy.penalties.overused_nontask},
          {"out_of_order", policy.penalties.out_of_order}}},
        {"max_turns", policy.max_turns}}},
      {"reward_weights",
       {{"app", policy.weights.app},
        {"depth", policy.weights.depth},
        {"info", policy.weights.info},
        {"len", policy.weights.len}}},
      {"personas",
       {{"likes_superheroes", personas.likes_superheroes},
        {"likes_disney", personas.likes_disney},
        {"seen_promoted_movie", personas.seen_promoted_movie},
        {"accepts_invitation", personas.accepts_invitation},
        {"chattiness_min", personas.chattiness_min},
        {"chattiness_max", personas.chattiness_max},
        {"repeat_prob", personas.repeat_prob},
        {"patience_min", personas.patience_min},
        {"patience_max", personas.patience_max}}},
      {"data_dir", data_dir.string()},
      {"output_dir", output_dir.string()},
  };
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig c;
  reject_unknown(j, "config",
                 {"variant", "episode_budget", "convergence", "seed", "evaluation_seed", "evaluation_episodes",
                  "policy", "reward_weights", "personas", "data_dir", "output_dir"});
  if (j.contains("variant")) {
    if (!j["variant"].is_string()) throw ConfigError("variant must be a string");
    c.variant = parse_variant(j["variant"].get<std::string>());
  }
  read(j, "episode_budget", c.episode_budget);
  read(j, "seed", c.seed);
  read(j, "evaluation_seed", c.evaluation_seed);
  read(j, "evaluation_episodes", c.evaluation_episodes);
  if (j.contains("convergence")) {
    const json& cv = j["convergence"];
    reject_unknown(cv, "convergence", {"window", "threshold", "statistic"});
    read(cv, "window", c.convergence.window);
    read(cv, "threshold", c.convergence.threshold);
    if (cv.contains("statistic")) {
      if (!cv["statistic"].is_string()) throw ConfigError("convergence statistic must be a string");
      c.convergence.statistic = parse_convergence_statistic(cv["statistic"].get<std::string>());
    }
  }
  if (j.contains("policy")) {
    const json& p = j["policy"];
    reject_unknown(p, "policy",
                   {"gamma", "alpha", "alpha_decay_visits", "epsilon", "constraint_mode", "penalties", "max_turns"});
    read(p, "gamma", c.policy.gamma);
    read(p, "alpha", c.policy.alpha);
    read(p, "alpha_decay_visits", c.policy.alpha_decay_visits);
    read(p, "max_turns", c.policy.max_turns);
    if (p.contains("epsilon")) {
      const json& e = p["epsilon"];
      reject_unknown(e, "policy.epsilon", {"start", "end", "decay_fraction"});
      read(e, "start", c.policy.epsilon.start);
      read(e, "end", c.policy.epsilon.end);
      read(e, "decay_fraction", c.policy.epsilon.decay_fraction);
    }
    if (p.contains("constraint_mode")) {
      std::string mode;
      read(p, "constraint_mode", mode);
      if (mode == "penalty") {
        c.policy.constraint_mode = ConstraintMode::Penalty;
      } else if (mode == "mask") {
        c.policy.constraint_mode = ConstraintMode::Mask;
      } else {
        throw ConfigError("constraint_mode must be 'penalty' or 'mask'");
      }
    }
    if (p.contains("penalties")) {
      const json& pen = p["penalties"];
      reject_unknown(pen, "policy.penalties", {"repeat_last", "overused_nontask", "out_of_order"});
      read(pen, "repeat_last", c.policy.penalties.repeat_last);
      read(pen, "overused_nontask", c.policy.penalties.overused_nontask);
      read(pen, "out_of_order", c.policy.penalties.out_of_order);
    }
  }
  if (j.contains("reward_weights")) {
    const json& w = j["reward_weights"];
    reject_unknown(w, "reward_weights", {"app", "depth", "info", "len"});
    read(w, "app", c.policy.weights.app);
    read(w, "depth", c.policy.weights.depth);
    read(w, "info", c.policy.weights.info);
    read(w, "len", c.policy.weights.len);
  }
  if (j.contains("personas")) {
    const json& m = j["personas"];
    reject_unknown(m, "personas",
                   {"likes_superheroes", "likes_disney", "seen_promoted_movie", "accepts_invitation", "chattiness_min",
                    "chattiness_max", "repeat_prob", "patience_min", "patience_max"});
    read(m, "likes_superheroes", c.personas.likes_superheroes);
    read(m, "likes_disney", c.personas.likes_disney);
    read(m, "seen_promoted_movie", c.personas.seen_promoted_movie);
    read(m, "accepts_invitation", c.personas.accepts_invitation);
    read(m, "chattiness_min", c.personas.chattiness_min);
    read(m, "chattiness_max", c.personas.chattiness_max);
    read(m, "repeat_prob", c.personas.repeat_prob);
    read(m, "patience_min", c.personas.patience_min);
    read(m, "patience_max", c.personas.patience_max);
  }
  std::string path;
  if (j.contains("data_dir")) {
    read(j, "data_dir", path);
    c.data_dir = path;
  }
  if (j.contains("output_dir")) {
    read(j, "output_dir", path);
    c.output_dir = path;
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed config " + path.string() + ": " + e.what());
  }
  ExperimentConfig c = from_json(j);
  // A relative data_dir in a config file is relative to that file.
  if (j.contains("data_dir") && c.data_dir.is_relative()) c.data_dir = path.parent_path() / c.data_dir;
  return c;
}

std::string_view to_string(ConvergenceStatistic s) noexcept {
  return s == ConvergenceStatistic::WindowMax ? "window_max" : "window_mean";
}

ConvergenceStatistic parse_convergence_statistic(std::string_view name) {
  if (name == "window_mean") return ConvergenceStatistic::WindowMean;
  if (name == "window_max") return ConvergenceStatistic::WindowMax;
  throw ConfigError("unknown convergence statistic '" + std::string(name) + "'");
}

bool ConvergenceMonitor::observe(const EpisodeResult& episode) {
  const double mean = episode.updates ? episode.sum_q_change / static_cast<double>(episode.updates) : 0.0;
  return observe(episode.max_q_change, mean);
}

bool ConvergenceMonitor::observe(double max_change, double mean_change) {
  if (criterion_.statistic == ConvergenceStatistic::WindowMax) {
    quiet_ = max_change < criterion_.threshold ? quiet_ + 1 : 0;
    return quiet_ >= criterion_.window;
  }
  window_.push_back(mean_change);
  window_sum_ += mean_change;
  if (window_.size() > criterion_.window) {
    window_sum_ -= window_.front();
    window_.pop_front();
  }
  return window_.size() == criterion_.window &&
         window_sum_ / static_cast<double>(criterion_.window) < criterion_.threshold;
}

TrainingResult train(const Resources& resources, const ExperimentConfig& config, const EpisodeObserver& observer) {
  config.validate();
  const DialogEngine engine(resources, config.variant, config.policy.constraint_mode);
  TrainingResult out;
  VisitCounts visits;
  ConvergenceMonitor monitor(config.convergence);
  for (std::size_t ep = 0; ep < config.episode_budget; ++ep) {
    const Persona persona = sample_persona(mix_seed(config.seed ^ kTrainPersonaStream, ep), config.personas, resources.kb);
    RuleBasedSimulator simulator(resources.kb, persona);
    EpisodeOptions options;
    options.epsilon = config.policy.epsilon.at(ep, config.episode_budget);
    options.seed = mix_seed(config.seed ^ kTrainPolicyStream, ep);
    options.conversation_id = "train-" + std::to_string(ep);
    const EpisodeResult r = run_episode(engine, out.table, &visits, simulator, config.policy, options);
    ++out.episodes;
    out.restarts += static_cast<std::size_t>(r.restarts);
    out.conversations_including_restarts += 1 + static_cast<std::size_t>(r.restarts);
    if (observer) observer(ep, r);
    if (monitor.observe(r)) {
      out.converged = true;
      break;
    }
  }
  out.episodes_to_convergence = out.episodes;
  return out;
}

EvaluationRow evaluate(const Resources& resources, const QTable& table, const ExperimentConfig& config,
                       std::size_t n_episodes, std::vector<Conversation>* transcripts) {
  if (n_episodes == 0) throw ValidationError("evaluation needs at least one episode");
  const DialogEngine engine(resources, config.variant, config.policy.constraint_mode);
  EvaluationRow row;
  row.variant = config.variant;
  row.episodes = n_episodes;
  std::size_t responses = 0, appropriate = 0, deep = 0, success = 0, pairs = 0, repeated = 0;
  double info = 0.0, len = 0.0;
  for (std::size_t i = 0; i < n_episodes; ++i) {
    const Persona persona =
        sample_persona(mix_seed(config.evaluation_seed ^ kEvalPersonaStream, i), config.personas, resources.kb);
    RuleBasedSimulator simulator(resources.kb, persona);
    EpisodeOptions options;
    options.seed = mix_seed(config.evaluation_seed, i);
    options.conversation_id = "eval-" + std::to_string(i);
    const EpisodeResult r = run_greedy_episode(engine, table, simulator, config.policy, options);
    row.restarts += static_cast<std::size_t>(r.restarts);
    responses += r.app_scores.size();
    appropriate += static_cast<std::size_t>(std::count(r.app_scores.begin(), r.app_scores.end(), 2));
    deep += r.reward.conv_depth ? 1 : 0;
    info += r.reward.info_gain;
    len += r.reward.conv_len;
    success += r.progress.task_success() ? 1 : 0;
    int task_turns = 0;
    std::optional<StrategyId> prev;
    for (const auto& u : r.conversation.utterances()) {
      if (u.speaker != Speaker::System) continue;
      if (u.turn_index > 1 && is_task(*u.strategy)) ++task_turns;
      if (u.turn_index > 1) {
        ++pairs;
        if (prev == u.strategy) ++repeated;
      }
      prev = u.strategy;
    }
    row.max_task_responses = std::max(row.max_task_responses, task_turns);
    if (transcripts) transcripts->push_back(r.conversation);
  }
  const double n = static_cast<double>(n_episodes);
  row.app_rate = responses ? 100.0 * static_cast<double>(appropriate) / static_cast<double>(responses) : 0.0;
  row.deep_rate = 100.0 * static_cast<double>(deep) / n;
  row.mean_info_gain = info / n;
  row.mean_conv_len = len / n;
  row.task_success_rate = 100.0 * static_cast<double>(success) / n;
  row.repeat_pair_rate = pairs ? 100.0 * static_cast<double>(repeated) / static_cast<double>(pairs) : 0.0;
  return row;
}

std::string to_csv(const EvaluationReport& report) {
  std::ostringstream out;
  out << "variant,episodes,app_rate,conv_depth,info_gain,conv_len,task_success,repeat_pairs,max_task_responses,"
         "restarts,converged,episodes_to_convergence,conversations_to_convergence\n";
  for (const auto& r : report.rows) {
    out << to_string(r.variant) << ',' << r.episodes << ',' << fixed(r.app_rate, 2) << ','
        << (r.depth_applicable() ? fixed(r.deep_rate, 2) : "NA") << ',' << fixed(r.mean_info_gain, 3) << ','
        << fixed(r.mean_conv_len, 3) << ',' << fixed(r.task_success_rate, 2) << ',' << fixed(r.repeat_pair_rate, 2)
        << ',' << r.max_task_responses << ',' << r.restarts << ',' << (r.converged ? "yes" : "no") << ','
        << r.episodes_to_convergence << ',' << r.conversations_to_convergence << '\n';
  }
  return out.str();
}

std::string to_table(const EvaluationReport& report) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-11s %8s %9s %9s %8s %12s %12s\n", "variant", "App", "ConvDepth", "InfoGain",
                "ConvLen", "TaskSuccess", "Convergence");
  out << line;
  for (const auto& r : report.rows) {
    const std::string depth = r.depth_applicable() ? fixed(r.deep_rate, 1) + "%" : "NA";
    const std::string conv =
        r.converged ? std::to_string(r.episodes_to_convergence) : ">" + std::to_string(r.episodes_to_convergence);
    std::snprintf(line, sizeof line, "%-11s %7.1f%% %9s %9.1f %8.1f %11.1f%% %12s\n",
                  std::string(to_string(r.variant)).c_str(), r.app_rate, depth.c_str(), r.mean_info_gain,
                  r.mean_conv_len, r.task_success_rate, conv.c_str());
    out << line;
  }
  return out.str();
}

EvaluationReport compare(const Resources& resources, const ExperimentConfig& config) {
  config.validate();
  EvaluationReport report;
  std::filesystem::create_directories(config.output_dir);
  for (Variant v : kAllVariants) {
    ExperimentConfig c = config;
    c.variant = v;
    const TrainingResult trained = train(resources, c);
    trained.table.save(config.output_dir / (std::string(to_string(v)) + ".qtable.json"), v);
    EvaluationRow row = evaluate(resources, trained.table, c, c.evaluation_episodes);
    row.converged = trained.converged;
    row.episodes_to_convergence = trained.episodes_to_convergence;
    row.conversations_to_convergence = trained.conversations_including_restarts;
    report.rows.push_back(row);
  }
  std::ofstream(config.output_dir / "compare.csv", std::ios::binary) << to_csv(report);
  std::ofstream(config.output_dir / "compare.txt", std::ios::binary) << to_table(report);
  return report;
}

}  // namespace mixdialog
