#pragma once

#include <stdexcept>
#include <string>

namespace ofc {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid numeric parameter (negative linewidth, roll-off outside (0,1], ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

class InputSizeError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

class SyncFailure : public Error {
public:
    using Error::Error;
};

class EqualizerDivergence : public Error {
public:
    using Error::Error;
};

class LoopDivergence : public Error {
public:
    using Error::Error;
};

class DegenerateGeometry : public Error {
public:
    using Error::Error;
};

class UnsupportedOperatingPoint : public Error {
public:
    using Error::Error;
};

}  // namespace ofc
