#pragma once

#include <stdexcept>
#include <string>

namespace mixdialog {

/// Base of every error raised by the library. `code()` is the stable,
/// machine-readable name that also appears in HTTP error bodies.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define MIXDIALOG_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  };

MIXDIALOG_DEFINE_ERROR(AlternationViolation)
MIXDIALOG_DEFINE_ERROR(ConversationEnded)
MIXDIALOG_DEFINE_ERROR(InvalidUtterance)
MIXDIALOG_DEFINE_ERROR(ParseError)
MIXDIALOG_DEFINE_ERROR(ValidationError)
MIXDIALOG_DEFINE_ERROR(EmptyCorpus)
MIXDIALOG_DEFINE_ERROR(AlreadyDelivered)
MIXDIALOG_DEFINE_ERROR(EmptyCandidateSet)
MIXDIALOG_DEFINE_ERROR(SimulatorFailure)
MIXDIALOG_DEFINE_ERROR(ConfigError)
MIXDIALOG_DEFINE_ERROR(VersionMismatch)
MIXDIALOG_DEFINE_ERROR(UnknownVariant)
MIXDIALOG_DEFINE_ERROR(SessionNotFound)
MIXDIALOG_DEFINE_ERROR(SessionClosed)
MIXDIALOG_DEFINE_ERROR(EmptyMessage)
MIXDIALOG_DEFINE_ERROR(RatingOutOfRange)
MIXDIALOG_DEFINE_ERROR(ConversationComplete)
MIXDIALOG_DEFINE_ERROR(PersistenceError)

#undef MIXDIALOG_DEFINE_ERROR

}  // namespace mixdialog
