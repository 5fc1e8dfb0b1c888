#pragma once

#include <stdexcept>
#include <string>

namespace cts {

// Input data breaks a structural invariant (malformed instance, unknown
// registration/resource reference in a schedule).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An API was called outside its contract (wrong variant, mismatched
// cost-vector level sets, exact solve over the size bound).
class UsageError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Contradictory or out-of-range generator parameters.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A fact file or parameter file was rejected; carries the 1-based
// position of the offending token.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line, int column)
        : std::runtime_error(msg + " (line " + std::to_string(line) +
                             ", column " + std::to_string(column) + ")"),
          line_(line),
          column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

// Greedy construction exhausted its restart budget without placing
// every registration.
class ConstructionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace cts
