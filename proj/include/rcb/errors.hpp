#pragma once

#include <stdexcept>
#include <string>

namespace rcb {

// Raised when an operation is called outside its domain (bad parameters,
// inconsistent sizes, lemma applicability conditions violated).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Root finding did not reach the requested tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The candidate set of robust estimators came out empty.
class ConfidenceFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rcb
