#include "scidyn/error.hpp"

namespace scidyn {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ZeroMass: return "ZeroMass";
        case ErrorCode::NegativeCount: return "NegativeCount";
        case ErrorCode::UnknownAxis: return "UnknownAxis";
        case ErrorCode::AxisMismatch: return "AxisMismatch";
        case ErrorCode::BadDepth: return "BadDepth";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::SupportViolation: return "SupportViolation";
        case ErrorCode::WrongArity: return "WrongArity";
        case ErrorCode::NegativeEntropy: return "NegativeEntropy";
        case ErrorCode::EmptySlice: return "EmptySlice";
        case ErrorCode::EmptySeries: return "EmptySeries";
        case ErrorCode::MissingPosition: return "MissingPosition";
        case ErrorCode::InvalidWeight: return "InvalidWeight";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::OverlapError: return "OverlapError";
        case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
        case ErrorCode::SelfLoop: return "SelfLoop";
        case ErrorCode::LabelMismatch: return "LabelMismatch";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

LineError::LineError(ErrorCode code, std::size_t line, const std::string& message)
    : Error(code, "line " + std::to_string(line) + ": " + message), line_(line) {}

}  // namespace scidyn
