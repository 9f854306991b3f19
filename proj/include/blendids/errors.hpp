#pragma once

#include <stdexcept>

namespace blendids {

// Error categories map onto CLI exit codes: config/usage -> 1, data -> 2,
// training -> 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class DataError : public Error {
public:
    using Error::Error;
};

class TrainError : public Error {
public:
    using Error::Error;
};

// Dimension mismatches get their own type so callers can tell a malformed
// input row apart from other data problems. Still exits as a data error.
class ShapeError : public DataError {
public:
    using DataError::DataError;
};

} // namespace blendids
