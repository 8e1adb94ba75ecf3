#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace modelkit {

/// Engine-wide error codes. Every throwing operation reports one of these;
/// callers that need to branch on failure kind switch on `code()` instead of
/// parsing messages.
enum class Errc {
    syntax,
    math_domain,
    unbound_variable,
    not_in_domain,
    duplicate_type,
    duplicate_attribute,
    duplicate_instance,
    unknown_parent,
    unknown_type,
    unknown_model,
    missing_attribute,
    kind_mismatch,
    dangling_reference,
    unknown_attribute,
    unknown_function,
    arity_mismatch,
    invariant,
    missing_time,
    fn_failure,
    missing_narrative_template,
    all_points_invalid,
    infeasible,
    unknown_element,
    no_convergence,
    io,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::syntax: return "SyntaxError";
        case Errc::math_domain: return "MathDomain";
        case Errc::unbound_variable: return "UnboundVariable";
        case Errc::not_in_domain: return "NotInDomain";
        case Errc::duplicate_type: return "DuplicateType";
        case Errc::duplicate_attribute: return "DuplicateAttribute";
        case Errc::duplicate_instance: return "DuplicateInstance";
        case Errc::unknown_parent: return "UnknownParent";
        case Errc::unknown_type: return "UnknownType";
        case Errc::unknown_model: return "UnknownModel";
        case Errc::missing_attribute: return "MissingAttribute";
        case Errc::kind_mismatch: return "KindMismatch";
        case Errc::dangling_reference: return "DanglingReference";
        case Errc::unknown_attribute: return "UnknownAttribute";
        case Errc::unknown_function: return "UnknownFunction";
        case Errc::arity_mismatch: return "ArityMismatch";
        case Errc::invariant: return "InvariantViolation";
        case Errc::missing_time: return "MissingTime";
        case Errc::fn_failure: return "FnFailure";
        case Errc::missing_narrative_template: return "MissingNarrativeTemplate";
        case Errc::all_points_invalid: return "AllPointsInvalid";
        case Errc::infeasible: return "Infeasible";
        case Errc::unknown_element: return "UnknownElement";
        case Errc::no_convergence: return "NoConvergence";
        case Errc::io: return "IoError";
    }
    return "ModelError";
}

/// The single exception type of the engine. `pos()` is a byte offset into the
/// offending source text for parse errors, npos otherwise.
class ModelError : public std::runtime_error {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    ModelError(Errc code, std::string message, std::size_t pos = npos)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message),
          code_(code),
          pos_(pos) {}

    Errc code() const noexcept { return code_; }
    std::size_t pos() const noexcept { return pos_; }

private:
    Errc code_;
    std::size_t pos_;
};

[[noreturn]] inline void fail(Errc code, std::string message, std::size_t pos = ModelError::npos) {
    throw ModelError(code, std::move(message), pos);
}

}  // namespace modelkit
