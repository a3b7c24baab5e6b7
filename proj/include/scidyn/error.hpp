#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace scidyn {

enum class ErrorCode {
    InvalidArgument,
    ZeroMass,
    NegativeCount,
    UnknownAxis,
    AxisMismatch,
    BadDepth,
    ShapeMismatch,
    SupportViolation,
    WrongArity,
    NegativeEntropy,
    EmptySlice,
    EmptySeries,
    MissingPosition,
    InvalidWeight,
    ParseError,
    OverlapError,
    NonPositiveWeight,
    SelfLoop,
    LabelMismatch,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so that
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

/// Parse and validation errors that point at a line of an input file.
class LineError : public Error {
  public:
    LineError(ErrorCode code, std::size_t line, const std::string& message);

    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

}  // namespace scidyn
