#pragma once

#include <stdexcept>
#include <string>

namespace unshred {

// Base for every error caused by bad input or configuration. The CLI maps
// these to exit code 1; anything else escaping a command is exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Dimensions, strip counts or page sizes that do not fit together.
class GeometryError : public Error {
public:
    using Error::Error;
};

// A strip too narrow or too short to carry an edge profile.
class DegenerateStripError : public Error {
public:
    using Error::Error;
};

class PgmError : public Error {
public:
    enum class Kind { BadMagic, BadHeader, MaxvalTooLarge, Truncated, BadSample };

    PgmError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

// Connected-component count above the configured limit.
class FragmentationError : public Error {
public:
    using Error::Error;
};

// Problem size beyond what an exhaustive search will accept.
class SizeError : public Error {
public:
    using Error::Error;
};

// A reconstruction refers to strips the ground truth does not know.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

// Malformed manifest, config or other serialized input.
class FormatError : public Error {
public:
    using Error::Error;
};

// Broken internal invariant. Not derived from Error on purpose: it signals a
// bug, not bad input.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace unshred
