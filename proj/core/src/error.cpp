#include "ftmp/error.hpp"

namespace ftmp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DenominatorUnderflow: return "DenominatorUnderflow";
    case ErrorCode::CoincidentAgents: return "CoincidentAgents";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::InvalidConstant: return "InvalidConstant";
    case ErrorCode::InvalidGeometry: return "InvalidGeometry";
    case ErrorCode::EmptyRoster: return "EmptyRoster";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::PlacementFailure: return "PlacementFailure";
    case ErrorCode::StencilOutOfDomain: return "StencilOutOfDomain";
    case ErrorCode::DegenerateDomain: return "DegenerateDomain";
    case ErrorCode::InsufficientData: return "InsufficientData";
  }
  return "Unknown";
}

namespace {

std::string compose(ErrorCode code, const std::string& message, std::optional<int> agent_id) {
  std::string out(to_string(code));
  if (agent_id) out += " (agent " + std::to_string(*agent_id) + ")";
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::optional<int> agent_id)
    : std::runtime_error(compose(code, message, agent_id)), code_(code), detail_(message), agent_id_(agent_id) {}

}  // namespace ftmp
