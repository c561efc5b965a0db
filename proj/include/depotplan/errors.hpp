#pragma once

#include <stdexcept>
#include <string>

namespace depotplan {

// Base class for all errors raised by the planning library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class BlockOutOfDay : public Error {
public:
    using Error::Error;
};

class DegenerateBlock : public Error {
public:
    using Error::Error;
};

class MissingTemperature : public Error {
public:
    using Error::Error;
};

class MissingCoupling : public Error {
public:
    using Error::Error;
};

class BigMTooSmall : public Error {
public:
    using Error::Error;
};

class UnregisteredVariable : public Error {
public:
    using Error::Error;
};

class BackendUnavailable : public Error {
public:
    using Error::Error;
};

class NameTooLong : public Error {
public:
    using Error::Error;
};

class TooLarge : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace depotplan
