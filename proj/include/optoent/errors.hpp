#pragma once

#include <stdexcept>
#include <string>

namespace optoent {

// Three failure families, mapped one-to-one onto CLI exit codes.
class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class UnstableDrift : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

class NegativeRadicand : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

class HorizonTooShort : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

class IoError : public std::runtime_error {
  public:
    IoError(const std::string& path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(path) {}

    const std::string& path() const noexcept { return path_; }

  private:
    std::string path_;
};

} // namespace optoent
