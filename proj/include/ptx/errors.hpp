#pragma once

#include <stdexcept>
#include <string>

namespace ptx {

/**
 * Base class for all library errors. Subclasses exist so callers can react
 * to a failure category (reject a file, fall back to another forecaster,
 * map to an exit code) without string-matching messages.
 */
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/** Malformed input row, bad timestamp, unparsable number. */
class ParseError : public Error {
public:
    using Error::Error;
};

/** Timestamps not on an hourly grid (sub-hourly data, stray minutes). */
class CadenceError : public Error {
public:
    using Error::Error;
};

/** A gap that the configured repair policy is not allowed to fill. */
class GapError : public Error {
public:
    using Error::Error;
};

/** Input shorter than the operation's minimum length. */
class LengthError : public Error {
public:
    using Error::Error;
};

/** Series combination over mismatched quantities, units or areas. */
class UnitError : public Error {
public:
    using Error::Error;
};

/** Two series whose timestamp ranges do not intersect. */
class EmptyOverlapError : public Error {
public:
    using Error::Error;
};

/** No usable values at all (all-missing input). */
class EmptyInputError : public Error {
public:
    using Error::Error;
};

/**
 * Numerically unusable input: zero variance where variance is required,
 * singular design matrix, zero-width normalization frame.
 */
class DegenerateError : public Error {
public:
    using Error::Error;
};

/** Normalization frame with inverted or zero-width axes. */
class FrameError : public DegenerateError {
public:
    using DegenerateError::DegenerateError;
};

/** Operation on a model that has not been fitted yet. */
class StateError : public Error {
public:
    using Error::Error;
};

/** Request for more hours than the candidate window contains. */
class CapacityError : public Error {
public:
    using Error::Error;
};

/** Not enough history before an origin, or a horizon outside the data. */
class RangeError : public Error {
public:
    using Error::Error;
};

/** Bad key, value or combination in a run configuration. */
class ConfigError : public Error {
public:
    using Error::Error;
};

/** Filesystem failure while reading inputs or writing outputs. */
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace ptx
