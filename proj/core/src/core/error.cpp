#include "crank/core/error.hpp"

namespace crank {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::NotPositiveDefinite: return "NotPositiveDefinite";
    case Errc::InvalidHyperparameter: return "InvalidHyperparameter";
    case Errc::PreconditionViolated: return "PreconditionViolated";
    case Errc::ZeroImpressions: return "ZeroImpressions";
    case Errc::DegenerateData: return "DegenerateData";
    case Errc::NonFiniteLoss: return "NonFiniteLoss";
    case Errc::EmptyCandidateSet: return "EmptyCandidateSet";
    case Errc::UnknownArm: return "UnknownArm";
    case Errc::UnknownPolicyKind: return "UnknownPolicyKind";
    case Errc::MissingFeatures: return "MissingFeatures";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::NoMatches: return "NoMatches";
    case Errc::ParseError: return "ParseError";
    case Errc::InvalidClick: return "InvalidClick";
    case Errc::WrongColumnCount: return "WrongColumnCount";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_numerical(Errc code) noexcept {
  switch (code) {
    case Errc::NotPositiveDefinite:
    case Errc::NonFiniteLoss:
    case Errc::DivisionByZero:
      return true;
    default:
      return false;
  }
}

}  // namespace crank
