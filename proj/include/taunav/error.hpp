#pragma once

#include <stdexcept>
#include <string>

namespace taunav {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (non-positive speed,
/// λ outside [0,1], duplicate abscissae, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The feature cannot be imaged by the requested camera.
class NotVisibleError : public Error {
 public:
  using Error::Error;
};

/// Image flow is numerically zero, so d_i / ḋ_i is undefined.
class IndeterminateFlowError : public Error {
 public:
  using Error::Error;
};

/// A paired-feature law was given the same point twice.
class DegeneratePairError : public Error {
 public:
  using Error::Error;
};

/// Circling about a feature the vehicle is (numerically) sitting on.
class SingularCircleError : public Error {
 public:
  using Error::Error;
};

/// Initial heading exactly opposite the goal direction.
class SingularHeadingError : public Error {
 public:
  using Error::Error;
};

/// Non-finite number entered the integrator.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Scene / protocol references that do not resolve.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed scene, protocol or CSV text. Line and column are 1-based; zero
/// means "not applicable".
class ParseError : public Error {
 public:
  ParseError(const std::string& source, int line, int column, const std::string& message)
      : Error(format(source, line, column, message)),
        source_(source),
        line_(line),
        column_(column),
        message_(message) {}

  const std::string& source() const noexcept { return source_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  static std::string format(const std::string& source, int line, int column,
                            const std::string& message) {
    std::string out = source;
    if (line > 0) {
      out += ":" + std::to_string(line);
      if (column > 0) out += ":" + std::to_string(column);
    }
    return out + ": " + message;
  }

  std::string source_;
  int line_;
  int column_;
  std::string message_;
};

}  // namespace taunav
