#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lexiqx {

/// Base of every error the library throws.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// An input file or directory could not be opened, or a loaded structure
/// failed validation as a whole (dangling edge, hypernym cycle, ...).
class LoadError : public Error {
  public:
    using Error::Error;
};

/// A record in an input file is malformed. `what()` names the file and
/// the 1-based line (or record) number.
class ParseError : public Error {
  public:
    ParseError(const std::string& file, std::size_t line, const std::string& message)
        : Error(file + ":" + std::to_string(line) + ": " + message), file_(file), line_(line) {}

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }

  private:
    std::string file_;
    std::size_t line_;
};

class LookupError : public Error {
  public:
    using Error::Error;
};

class ConfigError : public Error {
  public:
    using Error::Error;
};

}  // namespace lexiqx
