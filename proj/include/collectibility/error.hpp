#pragma once

#include <stdexcept>
#include <string>

namespace collectibility {

// Validation errors are bad inputs (files, flags, states that violate an
// invariant). Degeneracy errors are well-formed data on which a quantity is
// undefined, e.g. a coincidence ratio with a non-positive denominator.
enum class ErrorKind { validation, degenerate, numerical };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail_validation(const std::string& what) {
  throw Error(ErrorKind::validation, what);
}

[[noreturn]] inline void fail_degenerate(const std::string& what) {
  throw Error(ErrorKind::degenerate, what);
}

[[noreturn]] inline void fail_numerical(const std::string& what) {
  throw Error(ErrorKind::numerical, what);
}

}  // namespace collectibility
