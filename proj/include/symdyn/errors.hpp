#ifndef SYMDYN_ERRORS_HPP
#define SYMDYN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace symdyn {

/// Broad failure categories. The CLI maps each to an exit code.
enum class ErrorKind {
    parse,         // malformed input files
    precondition,  // caller violated a documented precondition
    budget,        // a search or iteration cap was exhausted
    inexact,       // a target could not be resolved to an exact value
    certificate,   // an internal or serialized certificate failed
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string code, const std::string& what)
        : std::runtime_error(what), kind_(kind), code_(std::move(code)) {}

    ErrorKind kind() const noexcept { return kind_; }
    /// Short machine-readable name, e.g. "EmptyShift".
    const std::string& code() const noexcept { return code_; }

private:
    ErrorKind kind_;
    std::string code_;
};

#define SYMDYN_DEFINE_ERROR(Name, Kind)                                   \
    class Name : public Error {                                          \
    public:                                                              \
        explicit Name(const std::string& what = #Name)                   \
            : Error(ErrorKind::Kind, #Name, what) {}                     \
    };

SYMDYN_DEFINE_ERROR(ParseError, parse)
SYMDYN_DEFINE_ERROR(EmptyShift, precondition)
SYMDYN_DEFINE_ERROR(WordNotInLanguage, precondition)
SYMDYN_DEFINE_ERROR(WordTooShort, precondition)
SYMDYN_DEFINE_ERROR(WordNotInDomain, precondition)
SYMDYN_DEFINE_ERROR(ImageNotInDomain, precondition)
SYMDYN_DEFINE_ERROR(ZeroMatrix, precondition)
SYMDYN_DEFINE_ERROR(NotAlgebraicInteger, precondition)
SYMDYN_DEFINE_ERROR(EntropyNotSeparated, precondition)
SYMDYN_DEFINE_ERROR(NotIrreducible, precondition)
SYMDYN_DEFINE_ERROR(NotMixingTarget, precondition)
SYMDYN_DEFINE_ERROR(OrbitNotFound, precondition)
SYMDYN_DEFINE_ERROR(BlowupUnavailable, precondition)
SYMDYN_DEFINE_ERROR(PreconditionError, precondition)
SYMDYN_DEFINE_ERROR(RealizationUnavailable, inexact)
SYMDYN_DEFINE_ERROR(InexactTarget, inexact)
SYMDYN_DEFINE_ERROR(SearchExhausted, budget)
SYMDYN_DEFINE_ERROR(IterationCap, budget)
SYMDYN_DEFINE_ERROR(NotFound, budget)
SYMDYN_DEFINE_ERROR(Undecided, budget)
SYMDYN_DEFINE_ERROR(CensusMismatch, certificate)
SYMDYN_DEFINE_ERROR(CertificateFailure, certificate)

#undef SYMDYN_DEFINE_ERROR

/// Sliding-code mismatch carrying the offending window.
class Mismatch : public Error {
public:
    Mismatch(std::string witness, const std::string& what)
        : Error(ErrorKind::certificate, "Mismatch", what), witness_(std::move(witness)) {}
    const std::string& witness() const noexcept { return witness_; }

private:
    std::string witness_;
};

}  // namespace symdyn

#endif
