#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vcage {

enum class ErrorCode {
  duplicate_id,
  placement_conflict,
  placement_exhausted,
  parse_error,
  validation_error,
  retrieval_error,
  unsatisfiable_relation,
  missing_object,
  out_of_bounds,
  grounding_error,
  binding_error,
  transport_error,
  protocol_error,
  gate_error,
  missing_annotations,
  io_error,
  schema_error,
  invalid_argument,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the whole library; code() carries the
// machine-readable category surfaced on the CLI's stderr JSON.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        message_(message) {}

  ErrorCode code() const noexcept { return code_; }

  // the message without the code prefix that what() carries
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace vcage
