#ifndef PNTA_ERRORS_HPP
#define PNTA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pnta {

// Declared error conditions. Each carries a stable kind so the CLI can map
// engine limitations to their own exit code.
enum class ErrorKind {
    Parse,
    Validation,
    NonConvexInvariant,
    StrictConstraintUnsupported,
    DiagonalUnsupported,
    TooFewInstances,
    UnsupportedQuantifierOperator,
    BoundUnsupported,
    IncompleteBinding,
    InitialTagged,
    InvariantViolated,
    Internal,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

    // Engine limitations: the model or property is fine, this engine just
    // refuses the combination.
    bool is_engine_limitation() const {
        switch (kind_) {
            case ErrorKind::StrictConstraintUnsupported:
            case ErrorKind::DiagonalUnsupported:
            case ErrorKind::BoundUnsupported:
            case ErrorKind::UnsupportedQuantifierOperator:
                return true;
            default:
                return false;
        }
    }

private:
    ErrorKind kind_;
};

}  // namespace pnta

#endif  // PNTA_ERRORS_HPP
