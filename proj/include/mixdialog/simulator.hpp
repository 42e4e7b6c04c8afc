#pragma once

#include <cstdint>
#include <string>

#include "mixdialog/core.hpp"
#include "mixdialog/knowledge_base.hpp"

namespace mixdialog {

struct Persona {
  bool likes_superheroes = false;
  bool likes_disney = false;
  bool seen_promoted_movie = false;
  bool accepts_invitation = false;
  double chattiness = 0.0;   // chance of adding a social sentence to a reply
  double repeat_prob = 0.0;  // chance of repeating the previous reply verbatim
  std::string favorite_hero;  // hero entity id
  int patience = 1;           // annoyances tolerated before leaving
  std::uint64_t seed = 0;

  bool operator==(const Persona&) const = default;
};

/// Population rates for sampled personas.
struct PersonaMarginals {
  double likes_superheroes = 0.42;
  double likes_disney = 0.22;
  double seen_promoted_movie = 0.41;
  double accepts_invitation = 0.80;
  double chattiness_min = 0.2;
  double chattiness_max = 0.8;
  double repeat_prob = 0.01;
  int patience_min = 1;
  int patience_max = 3;

  /// Throws ConfigError.
  void validate() const;
};

/// Deterministic in `seed`.
Persona sample_persona(std::uint64_t seed, const PersonaMarginals& marginals, const KnowledgeBase& kb);

struct SimulatedReply {
  Utterance utterance;
  bool leaves = false;  // the user ends the conversation after this reply
};

/// A simulated user. `begin_attempt` is called before every (re)started
/// conversation so stochastic simulators can vary between attempts.
class UserSimulator {
 public:
  virtual ~UserSimulator() = default;
  virtual void begin_attempt(std::uint64_t attempt) { (void)attempt; }
  /// Precondition: the conversation ends with a system turn.
  virtual SimulatedReply respond(const Conversation& conv) = 0;
};

/// Rule-table user keyed on the strategy of the system's last turn:
///  - task templates are answered according to the persona flags;
///  - social prompts get templated replies that may name the favorite hero
///    or a movie related to it;
///  - the user gets annoyed when the system repeats its previous strategy,
///    uses any non-task strategy a third time, or repeats a sentence, and
///    leaves once annoyed `patience` times;
///  - the user leaves after answering the invitation.
/// Replies never repeat an earlier user utterance unless the repeat roll
/// (probability repeat_prob) fires, in which case the previous reply is
/// returned verbatim. A reply is a pure function of (persona, conversation,
/// attempt).
class RuleBasedSimulator final : public UserSimulator {
 public:
  RuleBasedSimulator(const KnowledgeBase& kb, Persona persona)
      : kb_(&kb), persona_(std::move(persona)) {}

  void begin_attempt(std::uint64_t attempt) override { attempt_ = attempt; }
  SimulatedReply respond(const Conversation& conv) override;

  const Persona& persona() const noexcept { return persona_; }

  /// Annoyance events caused by the system so far.
  static int annoyances(const Conversation& conv);

 private:
  const KnowledgeBase* kb_;
  Persona persona_;
  std::uint64_t attempt_ = 0;
};

/// splitmix64-style mixing for deriving independent seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept;

}  // namespace mixdialog
