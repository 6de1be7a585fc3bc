#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace taperconv {

// Width or wavelength outside the interval a model is defined on.
class RangeError : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

class SolveError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Requested computation would exceed the step budget.
class ResourceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Malformed tabular input; line() is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

// Invalid run configuration; path() is the JSON pointer-like location.
class ConfigError : public std::runtime_error {
public:
  ConfigError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}

  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

} // namespace taperconv
