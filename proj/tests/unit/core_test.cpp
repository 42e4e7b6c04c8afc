#include <gtest/gtest.h>

#include <random>

#include "mixdialog/conversation_json.hpp"
#include "mixdialog/core.hpp"
#include "support.hpp"

namespace mixdialog {
namespace {

using testing::script;

TEST(Tokenize, LowercasesAndStripsPunctuation) {
  EXPECT_EQ(tokenize("I like superhero movies."), (std::vector<std::string>{"i", "like", "superhero", "movies"}));
  EXPECT_EQ(tokenize("Yes. I am."), (std::vector<std::string>{"yes", "i", "am"}));
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_TRUE(tokenize("  ...  !? ").empty());
}

TEST(Tokenize, JoinsHyphenatedWordsAndContractions) {
  EXPECT_EQ(tokenize("Spider-man, don't!"), (std::vector<std::string>{"spiderman", "dont"}));
  EXPECT_EQ(tokenize("tabs\tand\nnewlines"), (std::vector<std::string>{"tabs", "and", "newlines"}));
}

TEST(Tokenize, IsIdempotentOnRandomText) {
  std::mt19937 rng(11);
  const std::string alphabet = "abcXYZ019 .,!?'-\t\n";
  for (int i = 0; i < 500; ++i) {
    std::string text;
    const int n = static_cast<int>(rng() % 40);
    for (int k = 0; k < n; ++k) text.push_back(alphabet[rng() % alphabet.size()]);
    const auto tokens = tokenize(text);
    std::string joined;
    for (const auto& t : tokens) joined += (joined.empty() ? "" : " ") + t;
    EXPECT_EQ(tokenize(joined), tokens) << text;
    EXPECT_EQ(tokenize(text), tokens);
  }
}

TEST(StrategyId, TwelveValuesWithFixedPartition) {
  EXPECT_EQ(kAllStrategies.size(), 12u);
  int task = 0;
  for (StrategyId s : kAllStrategies) {
    task += is_task(s) ? 1 : 0;
    EXPECT_EQ(strategy_from_string(to_string(s)), s);
  }
  EXPECT_EQ(task, 8);
  EXPECT_FALSE(is_task(StrategyId::Retrieval));
  EXPECT_TRUE(is_task(StrategyId::InviteToMovie));
  EXPECT_FALSE(strategy_from_string("Nope").has_value());
}

TEST(Utterance, StrategyPresentExactlyForSystem) {
  EXPECT_THROW(make_utterance(Speaker::System, "hi", 1), InvalidUtterance);
  EXPECT_THROW(make_utterance(Speaker::User, "hi", 2, StrategyId::Retrieval), InvalidUtterance);
  EXPECT_THROW(make_utterance(Speaker::User, "hi", 0), InvalidUtterance);
  const auto u = make_utterance(Speaker::User, "Hi there", 2);
  EXPECT_EQ(u.tokens, (std::vector<std::string>{"hi", "there"}));
}

TEST(AppendTurn, GrowsAndEnforcesAlternation) {
  Conversation conv("c");
  conv = append_turn(conv, make_utterance(Speaker::System, "Hello", 1, StrategyId::ActiveParticipation));
  EXPECT_EQ(conv.size(), 1u);
  conv = append_turn(conv, make_utterance(Speaker::User, "Hi", 2));
  EXPECT_EQ(conv.size(), 2u);
  conv = append_turn(conv, make_utterance(Speaker::System, "So", 3, StrategyId::Retrieval));
  EXPECT_THROW(append_turn(conv, make_utterance(Speaker::System, "Again", 4, StrategyId::Retrieval)),
               AlternationViolation);
}

TEST(AppendTurn, FirstTurnMustBeSystem) {
  EXPECT_THROW(append_turn(Conversation("c"), make_utterance(Speaker::User, "Hi", 1)), AlternationViolation);
}

TEST(AppendTurn, RejectsGapsInTurnIndex) {
  auto conv = append_turn(Conversation("c"), make_utterance(Speaker::System, "Hello", 1, StrategyId::Retrieval));
  EXPECT_THROW(append_turn(conv, make_utterance(Speaker::User, "Hi", 3)), AlternationViolation);
}

TEST(AppendTurn, EndedConversationRejectsTurns) {
  auto conv = append_turn(Conversation("c"), make_utterance(Speaker::System, "Hello", 1, StrategyId::Retrieval));
  conv = end_conversation(conv, EndReason::UserQuit);
  EXPECT_TRUE(conv.ended());
  EXPECT_THROW(append_turn(conv, make_utterance(Speaker::User, "Hi", 2)), ConversationEnded);
  EXPECT_THROW(end_conversation(conv, EndReason::MaxTurns), ConversationEnded);
}

TEST(Conversation, SystemMinusUserIsZeroOrOne) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    Conversation conv("p");
    const int n = 1 + static_cast<int>(rng() % 30);
    for (int i = 1; i <= n; ++i) {
      const bool system = i % 2 == 1;
      conv = append_turn(conv, make_utterance(system ? Speaker::System : Speaker::User, "x", i,
                                              system ? std::optional(StrategyId::Retrieval) : std::nullopt));
      int diff = 0;
      for (const auto& u : conv.utterances()) diff += u.speaker == Speaker::System ? 1 : -1;
      EXPECT_TRUE(diff == 0 || diff == 1);
    }
  }
}

TEST(ConversationJson, RoundTripsThroughJson) {
  auto conv = script({{"Hello, I really like movies.", StrategyId::ActiveParticipation},
                      {"I like Spider-man.", std::nullopt},
                      {"Are you talking about Spider-Man?", StrategyId::Grounding}},
                     &testing::kb());
  conv = end_conversation(conv, EndReason::UserQuit);
  const auto j = to_json(conv);
  EXPECT_EQ(j["utterances"][1]["speaker"], "User");
  EXPECT_TRUE(j["utterances"][1]["strategy_id"].is_null());
  EXPECT_EQ(j["end_reason"], "UserQuit");
  EXPECT_EQ(conversation_from_json(j), conv);
  EXPECT_EQ(to_json(conversation_from_json(j)).dump(), j.dump());
}

TEST(ConversationJson, RejectsBrokenRecords) {
  auto conv = script({{"Hello", StrategyId::ActiveParticipation}, {"Hi", std::nullopt}});
  auto j = to_json(conv);
  j["utterances"][1]["speaker"] = "System";
  EXPECT_THROW(conversation_from_json(j), ParseError);
  EXPECT_THROW(conversation_from_json(nlohmann::json::array()), ParseError);
  auto bad_enum = to_json(conv);
  bad_enum["end_reason"] = "Bored";
  EXPECT_THROW(conversation_from_json(bad_enum), ParseError);
}

}  // namespace
}  // namespace mixdialog
