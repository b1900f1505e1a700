#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lfunc {

enum class ErrorKind {
    NotPrime,
    NoIrreducibleFound,
    SizeError,
    BaseMismatch,
    DivByZeroFunction,
    DidNotConverge,
    PlaceMismatch,
    RankMismatch,
    RamifiedInput,
    WrongTag,
    InvalidSatake,
    InvalidCharacter,
    InvalidTree,
    MissingDualData,
    MissingFormalPairing,
    MissingLiftData,
    NotTempered,
    EpsNotMonomial,
    PreconditionFailed,
    NotClosedForm,
    NotSelfDual,
    SizeMismatch,
    DuplicateConstituent,
    TypeMismatch,
    DeterminantMismatch,
    SchemaError,
    InternalError,
};

inline std::string_view to_string(ErrorKind k) {
    switch (k) {
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::NoIrreducibleFound: return "NoIrreducibleFound";
    case ErrorKind::SizeError: return "SizeError";
    case ErrorKind::BaseMismatch: return "BaseMismatch";
    case ErrorKind::DivByZeroFunction: return "DivByZeroFunction";
    case ErrorKind::DidNotConverge: return "DidNotConverge";
    case ErrorKind::PlaceMismatch: return "PlaceMismatch";
    case ErrorKind::RankMismatch: return "RankMismatch";
    case ErrorKind::RamifiedInput: return "RamifiedInput";
    case ErrorKind::WrongTag: return "WrongTag";
    case ErrorKind::InvalidSatake: return "InvalidSatake";
    case ErrorKind::InvalidCharacter: return "InvalidCharacter";
    case ErrorKind::InvalidTree: return "InvalidTree";
    case ErrorKind::MissingDualData: return "MissingDualData";
    case ErrorKind::MissingFormalPairing: return "MissingFormalPairing";
    case ErrorKind::MissingLiftData: return "MissingLiftData";
    case ErrorKind::NotTempered: return "NotTempered";
    case ErrorKind::EpsNotMonomial: return "EpsNotMonomial";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::NotClosedForm: return "NotClosedForm";
    case ErrorKind::NotSelfDual: return "NotSelfDual";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::DuplicateConstituent: return "DuplicateConstituent";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::DeterminantMismatch: return "DeterminantMismatch";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::InternalError: return "InternalError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so that
/// callers (the CLI in particular) can map it to a stable exit code.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
    if (!cond) fail(kind, what);
}

} // namespace lfunc
