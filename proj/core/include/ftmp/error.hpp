#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ftmp {

enum class ErrorCode {
  InvalidArgument,
  DenominatorUnderflow,
  CoincidentAgents,
  DomainViolation,
  DegenerateGeometry,
  InvalidConstant,
  InvalidGeometry,
  EmptyRoster,
  UnknownLabel,
  PlacementFailure,
  StencilOutOfDomain,
  DegenerateDomain,
  InsufficientData,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the core library. Errors raised while stepping a
// roster carry the id of the agent whose evaluation failed.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::optional<int> agent_id = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<int> agent_id() const noexcept { return agent_id_; }
  /// Message without the code / agent prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
  std::optional<int> agent_id_;
};

}  // namespace ftmp
