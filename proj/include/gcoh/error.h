#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gcoh {

enum class ErrorKind {
    invalid_argument,
    shape_error,
    not_symmetric,
    uncertainty_violation,
    not_completely_positive,
    not_faithful,
    invariant_violation,
    numeric_error,
    unsupported,
    parse_error,
    io_error,
    usage_error,
};

/// Stable kebab-case name, used in CLI error documents.
std::string_view kind_name(ErrorKind kind);

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &detail) : std::runtime_error(detail), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

}  // namespace gcoh
