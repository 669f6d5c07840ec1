#pragma once

#include <stdexcept>
#include <string>

namespace ramsey {

/// Base of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A document failed to parse or violated the schema. `path()` names the
/// offending field, e.g. `$.colours[3]`.
class ParseError : public Error
{
public:
    ParseError(std::string path, const std::string & message) :
        Error(path + ": " + message),
        _path(std::move(path))
    {
    }

    auto path() const noexcept -> const std::string & { return _path; }

private:
    std::string _path;
};

/// A value was constructed that breaks a type invariant.
class InvariantError : public Error
{
public:
    using Error::Error;
};

/// An edge from a vertex to itself was requested.
class DegenerateEdge : public Error
{
public:
    using Error::Error;
};

class ArityMismatch : public Error
{
public:
    using Error::Error;
};

/// An exponential or size-bounded routine was asked to exceed its cap.
class CapExceeded : public Error
{
public:
    using Error::Error;
};

/// Arithmetic that should be impossible for valid inputs; indicates a bug.
class InternalError : public Error
{
public:
    using Error::Error;
};

}
