#pragma once

#include <stdexcept>
#include <string>

namespace odsim {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid map geometry or world construction parameters.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text (map, trace, loss, scenario and sweep files).
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Trace content inconsistent with the world or the scenario roster.
class TraceError : public Error {
 public:
  using Error::Error;
};

/// Parameters outside the domain of a model (e.g. collision model with H >= T).
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Scenario or sweep configuration rejected during validation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace odsim
