#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace crank {

enum class Errc {
  NotPositiveDefinite,
  InvalidHyperparameter,
  PreconditionViolated,
  ZeroImpressions,
  DegenerateData,
  NonFiniteLoss,
  EmptyCandidateSet,
  UnknownArm,
  UnknownPolicyKind,
  MissingFeatures,
  EmptyDataset,
  DivisionByZero,
  NoMatches,
  ParseError,
  InvalidClick,
  WrongColumnCount,
  InvalidConfig,
  IoError,
};

std::string_view errc_name(Errc code) noexcept;

// Input-side errors map to CLI exit code 2, numerical failures to 3.
bool is_numerical(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace crank
