#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pbpois {

/// Malformed or out-of-domain user input (probability files, family specs, flags).
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
  InputError(const std::string& source, std::size_t line, const std::string& what)
      : std::invalid_argument(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  /// 1-based line number for file parse errors, 0 otherwise.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_ = 0;
};

/// The requested computation has no solution for this instance
/// (degenerate vector, target outside the range of the saddle map, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Too few quadrature nodes / transform points for the requested accuracy.
class ResolutionError : public std::runtime_error {
 public:
  explicit ResolutionError(const std::string& what) : std::runtime_error(what) {}
};

/// Exhaustive enumeration requested beyond its size limit.
class SizeLimitError : public std::length_error {
 public:
  explicit SizeLimitError(const std::string& what) : std::length_error(what) {}
};

/// Binary64 evaluation overflowed and the extended-precision rerun did not recover.
class EscalationError : public std::runtime_error {
 public:
  explicit EscalationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pbpois
