#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace edge_lca {

// Stable error codes. The textual names are part of the CLI contract.
enum class ErrorCode {
    InvalidTriple,
    NegativeQuantity,
    InvalidProfile,
    MissingCell,
    InvalidOrdering,
    ForbiddenCell,
    DuplicateCell,
    ParseError,
    MissingUnitFactor,
    InvalidUnit,
    UnknownFactorKey,
    InvalidOverrideUnit,
    ZeroTotal,
    InvalidTrend,
    NotCumulative,
    TooFewPoints,
    HorizonBeforeLastObserved,
    KindMismatch,
    InvalidScenario,
    NonPositiveStart,
    SyntaxError,
    UnsupportedVersion,
    UnknownBlock,
    UnknownLevel,
    DuplicateBlock,
    MissingBlock,
    ForbiddenCombination,
    DuplicateProfileName,
    InvalidOverride,
    BatchItemFailed,
    IoError,
    InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::InvalidTriple: return "InvalidTriple";
    case ErrorCode::NegativeQuantity: return "NegativeQuantity";
    case ErrorCode::InvalidProfile: return "InvalidProfile";
    case ErrorCode::MissingCell: return "MissingCell";
    case ErrorCode::InvalidOrdering: return "InvalidOrdering";
    case ErrorCode::ForbiddenCell: return "ForbiddenCell";
    case ErrorCode::DuplicateCell: return "DuplicateCell";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::MissingUnitFactor: return "MissingUnitFactor";
    case ErrorCode::InvalidUnit: return "InvalidUnit";
    case ErrorCode::UnknownFactorKey: return "UnknownFactorKey";
    case ErrorCode::InvalidOverrideUnit: return "InvalidOverrideUnit";
    case ErrorCode::ZeroTotal: return "ZeroTotal";
    case ErrorCode::InvalidTrend: return "InvalidTrend";
    case ErrorCode::NotCumulative: return "NotCumulative";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::HorizonBeforeLastObserved: return "HorizonBeforeLastObserved";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::InvalidScenario: return "InvalidScenario";
    case ErrorCode::NonPositiveStart: return "NonPositiveStart";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::UnknownBlock: return "UnknownBlock";
    case ErrorCode::UnknownLevel: return "UnknownLevel";
    case ErrorCode::DuplicateBlock: return "DuplicateBlock";
    case ErrorCode::MissingBlock: return "MissingBlock";
    case ErrorCode::ForbiddenCombination: return "ForbiddenCombination";
    case ErrorCode::DuplicateProfileName: return "DuplicateProfileName";
    case ErrorCode::InvalidOverride: return "InvalidOverride";
    case ErrorCode::BatchItemFailed: return "BatchItemFailed";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

// Source position, 1-based. line == 0 means "no position".
struct SourceLocation {
    std::size_t line = 0;
    std::size_t column = 0;
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, SourceLocation where = {})
        : std::runtime_error(format(code, message, where)), code_(code), where_(where), detail_(message)
    {
    }

    ErrorCode code() const noexcept { return code_; }
    SourceLocation where() const noexcept { return where_; }
    std::size_t line() const noexcept { return where_.line; }
    std::size_t column() const noexcept { return where_.column; }
    const std::string& detail() const noexcept { return detail_; }

private:
    static std::string format(ErrorCode code, const std::string& message, SourceLocation where)
    {
        std::string out = "error[";
        out += to_string(code);
        out += "]";
        if (where.line != 0) {
            out += " at " + std::to_string(where.line) + ":" + std::to_string(where.column);
        }
        out += ": ";
        out += message;
        return out;
    }

    ErrorCode code_;
    SourceLocation where_;
    std::string detail_;
};

} // namespace edge_lca
