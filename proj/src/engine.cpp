#include "mixdialog/engine.hpp"

#include <algorithm>

namespace mixdialog {

Resources Resources::load(const std::filesystem::path& data_dir) {
  return Resources{
      load_kb(data_dir / "kb.json"),
      Lexicon::load(data_dir / "lexicon"),
      RetrievalIndex::build(data_dir / "corpus" / "interview.tsv"),
      RetrievalIndex::build(data_dir / "corpus" / "subtitles.tsv"),
  };
}

std::vector<StrategyId> TurnPlan::actions() const {
  std::vector<StrategyId> out;
  for (const auto& c : candidates) {
    if (std::find(out.begin(), out.end(), c.strategy) == out.end()) out.push_back(c.strategy);
  }
  return out;
}

DialogEngine::DialogEngine(const Resources& resources, Variant variant, ConstraintMode mode)
    : resources_(&resources),
      variant_(variant),
      mode_(mode),
      understanding_(resources.kb, resources.lexicon),
      task_generator_(resources.kb),
      appropriateness_(resources.kb) {}

DialogContext DialogEngine::start(std::string conversation_id) const {
  DialogContext ctx;
  ctx.conversation = Conversation(std::move(conversation_id));
  const Topic topic = label_topic(kOpenerText, resources_->kb);
  ctx.conversation =
      append_turn(std::move(ctx.conversation),
                  make_utterance(Speaker::System, std::string(kOpenerText), 1, kOpenerStrategy, topic));
  return ctx;
}

void DialogEngine::observe_user(DialogContext& ctx, std::string text) const {
  observe_user(ctx, make_utterance(Speaker::User, std::move(text), ctx.conversation.next_turn_index()));
}

void DialogEngine::observe_user(DialogContext& ctx, Utterance user) const {
  if (!user.topic) user.topic = label_topic(user, resources_->kb);
  const Utterance* prev_system = ctx.conversation.last_from(Speaker::System);
  const bool answers_saw = prev_system && prev_system->strategy == StrategyId::SawTheMovie;
  ctx.conversation = append_turn(std::move(ctx.conversation), std::move(user));
  const Utterance& added = ctx.conversation.back();
  ctx.last_nlu = understanding_.analyze(added);
  ctx.profile = update_profile(std::move(ctx.profile), added, ctx.last_nlu);
  if (answers_saw && !ctx.progress.saw_movie_answer()) {
    ctx.progress = record_saw_movie_answer(std::move(ctx.progress), ctx.last_nlu.polarity);
  }
}

TurnPlan DialogEngine::plan(const DialogContext& ctx) const {
  TurnPlan out;
  const TaskContext tctx{ctx.conversation, ctx.last_nlu, ctx.progress, ctx.profile};
  out.candidates = task_generator_.generate(tctx);
  if (uses_nontask(variant_)) {
    const NonTaskContext nctx{ctx.conversation, ctx.last_nlu, ctx.profile};
    for (auto& c : generate_strategy_candidates(nctx, resources_->kb)) out.candidates.push_back(std::move(c));
    for (const RetrievalIndex* index : {&resources_->interview, &resources_->subtitles}) {
      for (auto& c : generate_retrieval_candidates(nctx, *index)) {
        const bool dup = std::any_of(out.candidates.begin(), out.candidates.end(),
                                     [&](const ResponseCandidate& o) { return o.text == c.text; });
        if (!dup) out.candidates.push_back(std::move(c));
      }
    }
  }

  const Utterance* context = ctx.conversation.last_from(Speaker::User);
  const Utterance* prev_system = ctx.conversation.last_from(Speaker::System);
  const std::optional<StrategyId> previous = prev_system ? prev_system->strategy : std::nullopt;
  int best = 0;
  for (const auto& c : out.candidates) {
    const int app = appropriateness_.score(context, c, previous);
    out.appropriateness.push_back(app);
    best = std::max(best, app);
  }
  const Coherence coherence = (!out.candidates.empty() && best == 2) ? Coherence::High : Coherence::Low;
  out.state = featurize(ctx.conversation, variant_, coherence, resources_->lexicon);

  if (mode_ == ConstraintMode::Mask && !out.candidates.empty()) {
    auto kept = apply_mask(out.candidates, out.state);
    if (kept.size() != out.candidates.size()) {
      std::vector<int> apps;
      for (const auto& k : kept) {
        const auto it = std::find(out.candidates.begin(), out.candidates.end(), k);
        apps.push_back(out.appropriateness[static_cast<std::size_t>(it - out.candidates.begin())]);
      }
      out.candidates = std::move(kept);
      out.appropriateness = std::move(apps);
    }
  }
  return out;
}

void DialogEngine::commit(DialogContext& ctx, const ResponseCandidate& chosen) const {
  const Topic topic = label_topic(chosen.text, resources_->kb);
  auto utt = make_utterance(Speaker::System, chosen.text, ctx.conversation.next_turn_index(), chosen.strategy, topic);
  ctx.conversation = append_turn(std::move(ctx.conversation), std::move(utt));
  if (is_task(chosen.strategy)) ctx.progress = mark_delivered(std::move(ctx.progress), chosen.strategy);
}

}  // namespace mixdialog
