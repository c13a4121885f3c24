#pragma once

#include <stdexcept>
#include <string>

namespace polarlam {

enum class ErrorKind {
    InvalidMaterial,
    EmptyStacking,
    InvalidArgument,
    NotAligned,
    CaseNotApplicable,
    ContractViolation,
    InputError,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace polarlam
