#pragma once

#include <stdexcept>
#include <string>

namespace edgerm {

enum class ErrorKind {
    domain,        // argument outside the declared domain (unknown id, bad size, ...)
    precondition,  // a documented precondition of the operation does not hold
    resource,      // enumeration cap or search budget exceeded
    malformed,     // unparsable or structurally broken input
    internal,      // an invariant that should be unreachable failed
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::resource: return "resource";
    case ErrorKind::malformed: return "malformed";
    case ErrorKind::internal: return "internal";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct DomainError : Error {
    explicit DomainError(const std::string& w) : Error(ErrorKind::domain, w) {}
};
struct PreconditionError : Error {
    explicit PreconditionError(const std::string& w) : Error(ErrorKind::precondition, w) {}
};
struct ResourceError : Error {
    explicit ResourceError(const std::string& w) : Error(ErrorKind::resource, w) {}
};
struct MalformedError : Error {
    explicit MalformedError(const std::string& w) : Error(ErrorKind::malformed, w) {}
};
struct InternalError : Error {
    explicit InternalError(const std::string& w) : Error(ErrorKind::internal, w) {}
};

}  // namespace edgerm
