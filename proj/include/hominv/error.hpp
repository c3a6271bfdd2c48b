#pragma once

#include <stdexcept>
#include <string>

namespace hominv {

enum class ErrorKind {
    InvalidInput,
    InvalidParameter,
    UndefinedAtOrigin,
    Parse,
    Precondition,
    ContinuationFailed,
    SingularJacobian,
    NoBracket,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace hominv
