#include "crowdsense/error.hpp"

namespace crowdsense {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::FewerThanTwoObservations: return "FewerThanTwoObservations";
    case ErrorCode::InvalidGeometry: return "InvalidGeometry";
    case ErrorCode::NoCoverage: return "NoCoverage";
    case ErrorCode::InvalidK: return "InvalidK";
    case ErrorCode::MismatchedLength: return "MismatchedLength";
    case ErrorCode::EmptyCheckInSet: return "EmptyCheckInSet";
    case ErrorCode::NoMatch: return "NoMatch";
    case ErrorCode::EmptyArea: return "EmptyArea";
    case ErrorCode::Unreachable: return "Unreachable";
    case ErrorCode::EmptyCandidates: return "EmptyCandidates";
    case ErrorCode::InfeasibleBudget: return "InfeasibleBudget";
    case ErrorCode::NoNearbyNode: return "NoNearbyNode";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DanglingEndpoint: return "DanglingEndpoint";
    case ErrorCode::UnknownKind: return "UnknownKind";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace crowdsense
