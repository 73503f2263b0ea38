#pragma once

#include <stdexcept>
#include <string>

namespace ncho {

enum class ErrorKind {
    Dimension,
    DegenerateInput,
    ContractViolation,
    SimplePoleViolation,
    DegeneratePencil,
    PoleOnUnitCircle,
    NotGeneric,
    Positivity,
    Convergence,
    Continuation,
    Refinement,
    NotAnEigenvalue,
    WrongBranch,
    NotInFamily,
    Schema,
};

const char* kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace ncho
