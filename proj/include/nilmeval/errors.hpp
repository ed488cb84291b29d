#pragma once

#include <stdexcept>
#include <string>

namespace nilmeval {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed file contents (bad CSV row, unreadable JSON, missing header).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Timestamps in an input file are not strictly increasing.
class OrderingError : public Error {
public:
    using Error::Error;
};

/// A value or parameter violates its domain (negative power, zero interval, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Two series cannot be compared: unequal intervals or lengths.
class AlignmentError : public Error {
public:
    using Error::Error;
};

/// Two series share no common timestamps.
class EmptyOverlapError : public Error {
public:
    using Error::Error;
};

/// An aggregate over zero elements was requested where at least one is required.
class EmptyInputError : public Error {
public:
    using Error::Error;
};

/// A combinatorial or memory limit was exceeded.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// An experiment or model configuration is inconsistent.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// An operation was invoked in the wrong object state (e.g. untrained model).
class StateError : public Error {
public:
    using Error::Error;
};

/// A file or directory could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace nilmeval
