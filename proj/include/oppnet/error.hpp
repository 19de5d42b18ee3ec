#pragma once

#include <stdexcept>
#include <string>

namespace oppnet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad input data: malformed trace files, saved artifacts that do not parse.
class DataError : public Error {
public:
    using Error::Error;
};

/// Invalid parameters or configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A precondition of an analysis routine does not hold for the given input.
class AnalysisError : public Error {
public:
    using Error::Error;
};

} // namespace oppnet
