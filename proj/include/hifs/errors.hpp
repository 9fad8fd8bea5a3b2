#pragma once

#include <stdexcept>
#include <string>

namespace hifs {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A point or parameter lies outside the domain it was declared in.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Fractional-linear evaluation hit a pole.
class SingularityError : public Error {
public:
    using Error::Error;
};

/// A computed quantity violates a mathematical invariant beyond tolerance.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// An operation was called outside its precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// An iteration budget ran out before a verdict could be reached.
class InconclusiveError : public Error {
public:
    using Error::Error;
};

/// Double precision or a resource cap was exhausted mid-construction.
class NumericalAbort : public Error {
public:
    using Error::Error;
};

/// Memory or horizon cap exceeded.
class CapExceeded : public Error {
public:
    using Error::Error;
};

/// Input text is not valid JSON or does not match the expected schema.
class MalformedInput : public Error {
public:
    using Error::Error;
};

/// A stream description names a type or rule that does not exist.
class UnknownStreamKind : public Error {
public:
    using Error::Error;
};

}  // namespace hifs
