#include <gtest/gtest.h>

#include <random>
#include <set>

#include "mixdialog/simulator.hpp"
#include "mixdialog/understanding.hpp"
#include "support.hpp"

namespace mixdialog {
namespace {

using testing::kb;

Persona persona(bool hero, bool seen, bool accepts, double repeat = 0.0) {
  Persona p;
  p.likes_superheroes = hero;
  p.seen_promoted_movie = seen;
  p.accepts_invitation = accepts;
  p.chattiness = 0.5;
  p.repeat_prob = repeat;
  p.favorite_hero = "hero:iron_man";
  p.patience = 3;
  return p;
}

Conversation ask(const std::string& text, StrategyId strategy) {
  return testing::script({{"Hello, I really like movies. How about we talk about movies?", StrategyId::ActiveParticipation},
                          {"Sure, I love movies.", {}},
                          {text, strategy}});
}

TEST(Simulator, SuperheroFanNamesSuperheroesWhenAskedForMovieType) {
  for (bool disney : {false, true}) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      Persona p = persona(true, false, true);
      p.likes_disney = disney;
      p.seed = seed;
      RuleBasedSimulator sim(kb(), p);
      const auto reply = sim.respond(ask("Do you like superhero movies or Disney movies?", StrategyId::ElicitMovieType));
      const auto& t = reply.utterance.tokens;
      EXPECT_NE(std::find(t.begin(), t.end(), "superhero"), t.end()) << reply.utterance.text;
    }
  }
}

TEST(Simulator, SawTheMovieAnswerMatchesPersona) {
  for (bool seen : {false, true}) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      Persona p = persona(false, seen, true);
      p.chattiness = 1.0;
      p.seed = seed;
      RuleBasedSimulator sim(kb(), p);
      const auto reply = sim.respond(
          ask("Have you seen the new superhero movie, 'Captain America: Civil War'?", StrategyId::SawTheMovie));
      EXPECT_EQ(classify_yes_no(reply.utterance), seen ? Polarity::Yes : Polarity::No) << reply.utterance.text;
      EXPECT_FALSE(reply.leaves);
    }
  }
}

TEST(Simulator, InvitationAnsweredPerPersonaThenUserLeaves) {
  for (bool accepts : {false, true}) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      Persona p = persona(true, false, accepts);
      p.seed = seed;
      RuleBasedSimulator sim(kb(), p);
      const auto reply =
          sim.respond(ask("Do you want to see Captain America: Civil War together?", StrategyId::InviteToMovie));
      EXPECT_EQ(classify_yes_no(reply.utterance), accepts ? Polarity::Yes : Polarity::No) << reply.utterance.text;
      EXPECT_TRUE(reply.leaves);
    }
  }
}

TEST(Simulator, RepeatProbabilityOneRepeatsThePreviousReply) {
  Persona p = persona(true, false, true, 1.0);
  RuleBasedSimulator sim(kb(), p);
  Conversation conv = testing::script(
      {{"Hello, I really like movies. How about we talk about movies?", StrategyId::ActiveParticipation}});
  const auto first = sim.respond(conv);
  conv = append_turn(std::move(conv), first.utterance);
  conv = append_turn(std::move(conv), make_utterance(Speaker::System, "Do you like superhero movies or Disney movies?",
                                                     conv.next_turn_index(), StrategyId::ElicitMovieType));
  const auto second = sim.respond(conv);
  EXPECT_EQ(second.utterance.text, first.utterance.text);
}

TEST(Simulator, RespondRequiresASystemTurnLast) {
  RuleBasedSimulator sim(kb(), persona(true, false, true));
  EXPECT_THROW(sim.respond(Conversation("empty")), SimulatorFailure);
  auto conv = ask("Who is your favorite superhero?", StrategyId::ActiveParticipation);
  conv = append_turn(std::move(conv), testing::user("Iron Man.", 4));
  EXPECT_THROW(sim.respond(conv), SimulatorFailure);
}

TEST(Simulator, AnnoyedUserLeavesOncePatienceRunsOut) {
  Persona p = persona(true, false, true);
  p.patience = 2;
  RuleBasedSimulator sim(kb(), p);
  auto conv = ask("What kind of movies do you love?", StrategyId::Retrieval);
  auto reply = sim.respond(conv);
  EXPECT_FALSE(reply.leaves);
  EXPECT_EQ(RuleBasedSimulator::annoyances(conv), 0);
  conv = append_turn(std::move(conv), reply.utterance);
  conv = append_turn(std::move(conv), make_utterance(Speaker::System, "Could you tell me more about that?",
                                                     conv.next_turn_index(), StrategyId::ActiveParticipation));
  reply = sim.respond(conv);
  EXPECT_FALSE(reply.leaves);
  conv = append_turn(std::move(conv), reply.utterance);
  // Same strategy twice in a row: first annoyance.
  conv = append_turn(std::move(conv), make_utterance(Speaker::System, "What do you usually do for fun?",
                                                     conv.next_turn_index(), StrategyId::ActiveParticipation));
  EXPECT_EQ(RuleBasedSimulator::annoyances(conv), 1);
  reply = sim.respond(conv);
  EXPECT_FALSE(reply.leaves);
  conv = append_turn(std::move(conv), reply.utterance);
  conv = append_turn(std::move(conv), make_utterance(Speaker::System, "Are you talking about Iron Man?",
                                                     conv.next_turn_index(), StrategyId::Grounding));
  reply = sim.respond(conv);
  EXPECT_FALSE(reply.leaves);
  conv = append_turn(std::move(conv), reply.utterance);
  // Third use of a non-task strategy: second annoyance.
  conv = append_turn(std::move(conv), make_utterance(Speaker::System, "Which superhero do you know best?",
                                                     conv.next_turn_index(), StrategyId::ActiveParticipation));
  EXPECT_EQ(RuleBasedSimulator::annoyances(conv), 2);
  EXPECT_TRUE(sim.respond(conv).leaves);
}

// Drives the simulator with a uniformly random MixGlobal system.
std::vector<Conversation> random_conversations(double repeat_prob, int n) {
  const DialogEngine engine(testing::resources(), Variant::MixGlobal);
  std::vector<Conversation> out;
  for (int i = 0; i < n; ++i) {
    PersonaMarginals m;
    m.repeat_prob = repeat_prob;
    RuleBasedSimulator sim(kb(), sample_persona(static_cast<std::uint64_t>(i), m, kb()));
    std::mt19937_64 rng(static_cast<std::uint64_t>(i));
    DialogContext ctx = engine.start("r");
    while (ctx.conversation.size() < 40) {
      const auto reply = sim.respond(ctx.conversation);
      engine.observe_user(ctx, reply.utterance);
      if (reply.leaves) break;
      const auto plan = engine.plan(ctx);
      if (plan.candidates.empty()) break;
      std::uniform_int_distribution<std::size_t> pick(0, plan.candidates.size() - 1);
      engine.commit(ctx, plan.candidates[pick(rng)]);
    }
    out.push_back(std::move(ctx.conversation));
  }
  return out;
}

TEST(Simulator, NeverRepeatsItselfWhenRepeatProbabilityIsZero) {
  for (const auto& conv : random_conversations(0.0, 300)) {
    std::set<std::string> seen;
    for (const auto& u : conv.utterances()) {
      if (u.speaker != Speaker::User) continue;
      EXPECT_TRUE(seen.insert(u.text).second) << u.text;
    }
  }
}

TEST(Simulator, ReplyIsAPureFunctionOfPersonaConversationAndAttempt) {
  const auto convs = random_conversations(0.1, 40);
  PersonaMarginals m;
  m.repeat_prob = 0.1;
  for (std::size_t i = 0; i < convs.size(); ++i) {
    const Persona p = sample_persona(i, m, kb());
    Conversation prefix("r");
    for (const auto& u : convs[i].utterances()) {
      if (u.speaker == Speaker::System) {
        prefix = append_turn(std::move(prefix), u);
        RuleBasedSimulator a(kb(), p);
        RuleBasedSimulator b(kb(), p);
        const auto ra = a.respond(prefix);
        const auto rb = b.respond(prefix);
        EXPECT_EQ(ra.utterance.text, rb.utterance.text);
        EXPECT_EQ(ra.leaves, rb.leaves);
      } else {
        prefix = append_turn(std::move(prefix), u);
      }
    }
  }
}

TEST(Simulator, AttemptNumberChangesTheRandomStream) {
  Persona p = persona(true, false, true, 0.5);
  const auto conv = ask("Could you tell me more about that?", StrategyId::ActiveParticipation);
  std::set<std::string> replies;
  for (std::uint64_t attempt = 0; attempt < 20; ++attempt) {
    RuleBasedSimulator sim(kb(), p);
    sim.begin_attempt(attempt);
    replies.insert(sim.respond(conv).utterance.text);
  }
  EXPECT_GT(replies.size(), 1u);
}

TEST(Persona, SameSeedSamePersona) {
  const PersonaMarginals m;
  for (std::uint64_t seed : {0ull, 1ull, 77ull, 123456789ull}) {
    EXPECT_EQ(sample_persona(seed, m, kb()), sample_persona(seed, m, kb()));
  }
  EXPECT_NE(sample_persona(1, m, kb()), sample_persona(2, m, kb()));
}

TEST(Persona, MarginalsMatchConfiguredRates) {
  const PersonaMarginals m;
  double hero = 0, disney = 0, seen = 0, accepts = 0;
  const int n = 10000;
  std::set<std::string> favorites;
  for (int i = 0; i < n; ++i) {
    const Persona p = sample_persona(static_cast<std::uint64_t>(i), m, kb());
    hero += p.likes_superheroes;
    disney += p.likes_disney;
    seen += p.seen_promoted_movie;
    accepts += p.accepts_invitation;
    EXPECT_GE(p.chattiness, m.chattiness_min);
    EXPECT_LE(p.chattiness, m.chattiness_max);
    EXPECT_GE(p.patience, m.patience_min);
    EXPECT_LE(p.patience, m.patience_max);
    EXPECT_NE(kb().find_hero(p.favorite_hero), nullptr);
    favorites.insert(p.favorite_hero);
  }
  EXPECT_NEAR(seen / n, 0.41, 0.02);
  EXPECT_NEAR(accepts / n, 0.80, 0.02);
  EXPECT_NEAR(hero / n, 0.42, 0.02);
  EXPECT_NEAR(disney / n, 0.22, 0.02);
  EXPECT_EQ(favorites.size(), kb().heroes().size());
}

TEST(Persona, MarginalsValidate) {
  PersonaMarginals m;
  m.seen_promoted_movie = 1.5;
  EXPECT_THROW(m.validate(), ConfigError);
  m = PersonaMarginals{};
  m.chattiness_min = 0.9;
  m.chattiness_max = 0.1;
  EXPECT_THROW(m.validate(), ConfigError);
  m = PersonaMarginals{};
  m.patience_min = 0;
  EXPECT_THROW(m.validate(), ConfigError);
  EXPECT_NO_THROW(PersonaMarginals{}.validate());
}

}  // namespace
}  // namespace mixdialog
