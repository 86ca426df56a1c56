#pragma once

#include <stdexcept>
#include <string>

namespace cyield {

// Base of every library error. `kind()` lets callers (the CLI in particular)
// map failures onto exit codes without string matching.
class Error : public std::runtime_error {
public:
    enum class Kind { Input, Numeric, State };

    Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

// Argument outside the operation's domain (negative reserve, p > 100, ...).
struct DomainError : Error {
    explicit DomainError(const std::string& what) : Error(Kind::Input, what) {}
};

// Input data is missing, too short, or badly shaped.
struct DataError : Error {
    explicit DataError(const std::string& what) : Error(Kind::Input, what) {}
};

// Mathematically undefined or ill-conditioned result.
struct NumericError : Error {
    explicit NumericError(const std::string& what) : Error(Kind::Numeric, what) {}
};

// Operation not allowed in the object's current lifecycle state.
struct StateError : Error {
    explicit StateError(const std::string& what) : Error(Kind::State, what) {}
};

} // namespace cyield
