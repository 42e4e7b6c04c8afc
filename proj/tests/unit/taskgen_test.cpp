#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "mixdialog/task_generator.hpp"
#include "support.hpp"

namespace mixdialog {
namespace {

using testing::kb;

nlohmann::json small_kb_json() {
  return {
      {"heroes", {{{"id", "h"}, {"name", "Hero"}, {"real_name", "Real"}, {"eye_color", "grey"}, {"origin", "fell"}}}},
      {"movies",
       {{{"id", "m1"}, {"title", "One"}, {"year", 2001}, {"related_hero_ids", {"h"}}, {"is_promoted", true},
         {"detail_snippets", {"A scene."}}},
        {{"id", "m2"}, {"title", "Two"}, {"year", 2002}, {"related_hero_ids", {"h"}}, {"is_promoted", false},
         {"detail_snippets", nlohmann::json::array()}}}},
  };
}

TEST(KnowledgeBase, BundledFixtureMeetsContract) {
  EXPECT_GE(kb().heroes().size(), 5u);
  EXPECT_GE(kb().movies().size(), 4u);
  const auto promoted = std::count_if(kb().movies().begin(), kb().movies().end(),
                                      [](const Movie& m) { return m.is_promoted; });
  EXPECT_EQ(promoted, 1);
  EXPECT_EQ(kb().promoted_movie().title, "Captain America: Civil War");
  EXPECT_EQ(kb().promoted_hero().name, "Captain America");
}

TEST(KnowledgeBase, TwoPromotedMoviesRejected) {
  auto j = small_kb_json();
  j["movies"][1]["is_promoted"] = true;
  const auto dir = testing::scratch_dir("kb_two_promoted");
  testing::write_file(dir / "kb.json", j.dump());
  EXPECT_THROW(load_kb(dir / "kb.json"), ValidationError);
}

TEST(KnowledgeBase, NoPromotedMovieRejected) {
  auto j = small_kb_json();
  j["movies"][0]["is_promoted"] = false;
  EXPECT_THROW(kb_from_json(j), ValidationError);
}

TEST(KnowledgeBase, UnresolvedHeroRejected) {
  auto j = small_kb_json();
  j["movies"][1]["related_hero_ids"] = {"ghost"};
  try {
    kb_from_json(j);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("m2"), std::string::npos);
  }
}

TEST(KnowledgeBase, MissingOrMalformedFileIsParseError) {
  EXPECT_THROW(load_kb("/nonexistent/kb.json"), ParseError);
  const auto dir = testing::scratch_dir("kb_malformed");
  testing::write_file(dir / "kb.json", "{ not json");
  EXPECT_THROW(load_kb(dir / "kb.json"), ParseError);
  testing::write_file(dir / "kb.json", R"({"heroes": [{"id": "x"}], "movies": []})");
  EXPECT_THROW(load_kb(dir / "kb.json"), ParseError);
}

TEST(KnowledgeBase, LookupsByEntityId) {
  ASSERT_NE(kb().find_hero("hero:iron_man"), nullptr);
  EXPECT_EQ(kb().find_hero("hero:iron_man")->eye_color, "blue");
  EXPECT_EQ(kb().find_hero("movie:iron_man_2008"), nullptr);
  EXPECT_EQ(kb().movie_for_hero("hero:human_torch")->title, "Fantastic Four");
}

TEST(TaskProgress, DeliveredAndPendingPartitionTheTemplates) {
  TaskProgress p;
  EXPECT_EQ(p.pending().size(), 8u);
  p = mark_delivered(p, StrategyId::ElicitMovieType);
  EXPECT_EQ(p.delivered_list(), std::vector<StrategyId>{StrategyId::ElicitMovieType});
  EXPECT_EQ(p.pending().size(), 7u);
  EXPECT_THROW(mark_delivered(p, StrategyId::ElicitMovieType), AlreadyDelivered);
  EXPECT_THROW(mark_delivered(p, StrategyId::Retrieval), ValidationError);
}

TEST(TaskProgress, AllEightInAnyOrderSucceeds) {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<StrategyId> order(kTaskStrategies.begin(), kTaskStrategies.end());
    std::shuffle(order.begin(), order.end(), rng);
    TaskProgress p;
    for (std::size_t i = 0; i < order.size(); ++i) {
      EXPECT_FALSE(p.task_success());
      p = mark_delivered(p, order[i]);
      const auto list = p.delivered_list();
      std::set<StrategyId> d(list.begin(), list.end());
      for (StrategyId s : p.pending()) EXPECT_EQ(d.count(s), 0u);
      EXPECT_EQ(d.size() + p.pending().size(), 8u);
    }
    EXPECT_TRUE(p.task_success());
  }
}

// Drives the engine's task side turn by turn.
struct TaskDriver {
  const DialogEngine engine{testing::resources(), Variant::TaskGlobal};
  DialogContext ctx = engine.start("t");

  std::vector<ResponseCandidate> say(const std::string& text) {
    engine.observe_user(ctx, text);
    return engine.plan(ctx).candidates;
  }
  void deliver(const std::vector<ResponseCandidate>& cs, StrategyId s) {
    const auto it = std::find_if(cs.begin(), cs.end(), [&](const auto& c) { return c.strategy == s; });
    ASSERT_NE(it, cs.end()) << to_string(s);
    engine.commit(ctx, *it);
  }
};

const ResponseCandidate* find(const std::vector<ResponseCandidate>& cs, StrategyId s) {
  const auto it = std::find_if(cs.begin(), cs.end(), [&](const auto& c) { return c.strategy == s; });
  return it == cs.end() ? nullptr : &*it;
}

TEST(TaskGenerator, FreshProgressOffersElicit) {
  TaskDriver d;
  const auto cs = d.say("Sure, I love movies.");
  const auto* elicit = find(cs, StrategyId::ElicitMovieType);
  ASSERT_NE(elicit, nullptr);
  EXPECT_EQ(elicit->text, "Do you like superhero movies or Disney movies?");
  EXPECT_EQ(elicit->source, ResponseSource::Task);
  EXPECT_EQ(find(cs, StrategyId::GroundOnSuperhero), nullptr);
  EXPECT_EQ(find(cs, StrategyId::DiscussRelevantMovie), nullptr);
  EXPECT_EQ(find(cs, StrategyId::PromoteTheMovie), nullptr);
  EXPECT_EQ(find(cs, StrategyId::InviteToMovie), nullptr);
}

TEST(TaskGenerator, DetectedHeroUnlocksGrounding) {
  TaskDriver d;
  const auto cs = d.say("I like Iron Man.");
  const auto* ground = find(cs, StrategyId::GroundOnSuperhero);
  ASSERT_NE(ground, nullptr);
  EXPECT_EQ(ground->text, "I really like Iron Man's blue eyes.");
  EXPECT_TRUE(ground->precondition_just_met);
  const auto* relevant = find(cs, StrategyId::DiscussRelevantMovie);
  ASSERT_NE(relevant, nullptr);
  EXPECT_EQ(relevant->text, "I really like The Avengers, have you seen it before?");
  const auto* detail = find(cs, StrategyId::DiscussMovieDetail);
  ASSERT_NE(detail, nullptr);
  EXPECT_EQ(detail->text, "I really liked The Avengers. When Iron Man came back alive, I cried.");
}

TEST(TaskGenerator, GroundingRotatesAttributes) {
  TaskDriver d;
  auto cs = d.say("I like Iron Man.");
  // A non-task grounding on the same hero advances the rotation.
  d.engine.commit(d.ctx, {"Are you talking about Iron Man, the one who built his first suit of armor in a cave?",
                          StrategyId::Grounding, ResponseSource::NonTask, {"hero:iron_man"}});
  cs = d.say("Yes, that one.");
  ASSERT_NE(find(cs, StrategyId::GroundOnSuperhero), nullptr);
  EXPECT_EQ(find(cs, StrategyId::GroundOnSuperhero)->text,
            "I really like Iron Man, and Tony Stark is such a cool secret identity.");
  EXPECT_FALSE(find(cs, StrategyId::GroundOnSuperhero)->precondition_just_met);
}

TEST(TaskGenerator, PromoteAndInviteGating) {
  TaskDriver d;
  auto cs = d.say("Okay.");
  d.deliver(cs, StrategyId::SawTheMovie);
  cs = d.say("No, not yet.");
  ASSERT_NE(find(cs, StrategyId::PromoteTheMovie), nullptr);
  EXPECT_NE(find(cs, StrategyId::PromoteTheMovie)->text.find("just saw"), std::string::npos);
  EXPECT_TRUE(find(cs, StrategyId::PromoteTheMovie)->precondition_just_met);
  EXPECT_EQ(find(cs, StrategyId::InviteToMovie), nullptr);
  d.deliver(cs, StrategyId::PromoteTheMovie);
  cs = d.say("Sounds good.");
  ASSERT_NE(find(cs, StrategyId::InviteToMovie), nullptr);
  EXPECT_EQ(find(cs, StrategyId::InviteToMovie)->text, "Do you want to see Captain America: Civil War together?");
}

TEST(TaskGenerator, YesToSawOpensInviteDirectly) {
  TaskDriver d;
  auto cs = d.say("Okay.");
  d.deliver(cs, StrategyId::SawTheMovie);
  cs = d.say("Yes, I saw it last week.");
  ASSERT_NE(find(cs, StrategyId::InviteToMovie), nullptr);
  ASSERT_NE(find(cs, StrategyId::PromoteTheMovie), nullptr);
  EXPECT_NE(find(cs, StrategyId::PromoteTheMovie)->text.find("also saw"), std::string::npos);
}

TEST(TaskGenerator, AllDeliveredMeansNoCandidates) {
  TaskDriver d;
  for (StrategyId s : kTaskStrategies) d.ctx.progress = mark_delivered(d.ctx.progress, s);
  EXPECT_TRUE(d.say("I like Iron Man and The Avengers.").empty());
}

TEST(TaskGenerator, NeverOffersDeliveredOrUnfilledTemplates) {
  std::mt19937 rng(9);
  const std::vector<std::string> replies = {"I like Thor.", "No.", "Yes.", "I watched Man of Steel.", "Okay.",
                                            "I like Disney movies.", "Batman is cool."};
  for (int trial = 0; trial < 100; ++trial) {
    TaskDriver d;
    for (int turn = 0; turn < 10; ++turn) {
      const auto cs = d.say(replies[rng() % replies.size()]);
      if (cs.empty()) break;
      for (const auto& c : cs) {
        EXPECT_FALSE(d.ctx.progress.delivered(c.strategy));
        EXPECT_FALSE(c.text.empty());
        EXPECT_EQ(c.text.find('{'), std::string::npos);
        EXPECT_TRUE(c.prerequisites_met);
      }
      d.engine.commit(d.ctx, cs[rng() % cs.size()]);
    }
  }
}

TEST(TaskGenerator, GatingMonotonicityReachesAllEight) {
  // The user names a hero and a movie and answers every question.
  TaskDriver d;
  std::set<StrategyId> ever;
  const std::vector<std::string> replies = {"Sure.", "I like superhero movies.", "I like Thor.",
                                            "That is nice.", "Yes, I saw Thor: Ragnarok.", "Cool.",
                                            "No, I have not.", "Okay.", "Yes."};
  for (const auto& reply : replies) {
    const auto cs = d.say(reply);
    if (cs.empty()) break;
    for (const auto& c : cs) ever.insert(c.strategy);
    d.engine.commit(d.ctx, cs.front());
  }
  EXPECT_EQ(ever.size(), 8u);
  EXPECT_TRUE(d.ctx.progress.task_success());
}

}  // namespace
}  // namespace mixdialog
