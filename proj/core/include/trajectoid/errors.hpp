#pragma once

#include <stdexcept>
#include <string>

namespace trajectoid {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// CSV or numeric input that could not be parsed; carries the 1-based line.
class ParseError : public Error {
  public:
    ParseError(const std::string& what, int line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    int line() const { return line_; }

  private:
    int line_;
};

/// Trace endpoints are antipodal: the closing geodesic is not unique and the
/// enclosed area jumps by 2*pi*r^2 across this configuration.
class AntipodalError : public Error {
  public:
    using Error::Error;
};

}  // namespace trajectoid
