#pragma once

#include <stdexcept>
#include <string>

namespace ldes {

// Root of every error raised by the library. The CLI maps the concrete
// subclasses onto process exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A file could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

// Input data violates a documented invariant (bad CSV row, profile length,
// missing config key, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

// A caller passed an argument outside the operation's precondition.
class ArgumentError : public Error {
public:
    using Error::Error;
};

// An operation was invoked on an object in the wrong lifecycle state, e.g.
// expanding candidates twice.
class StateError : public Error {
public:
    using Error::Error;
};

// A primal point handed back for accounting does not satisfy its model.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

// The LP backend did not return an optimal solution.
class SolveError : public Error {
public:
    using Error::Error;
};

}  // namespace ldes
