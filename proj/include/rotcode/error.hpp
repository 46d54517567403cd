#pragma once

#include <stdexcept>
#include <string>

namespace rotcode {

/// Outcome of one check.
enum class Status { Pass, Fail, NotApplicable, Inconclusive };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    case Status::NotApplicable: return "N/A";
    case Status::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An oracle or partition spec that cannot describe a valid input.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// A decision stayed undecided up to the precision cap.
class PrecisionExhausted : public Error {
 public:
  using Error::Error;
};

/// An orbit point is provably equal to a partition boundary.
class BoundaryHit : public Error {
 public:
  using Error::Error;
};

/// A residual fell below ball resolution and no exactness tag settles it.
class Inconclusive : public Error {
 public:
  using Error::Error;
};

/// The mismatch set is not a union of upward progressions.
class StructureViolation : public Error {
 public:
  using Error::Error;
};

/// A certified error bound failed; carries the offending level and window.
class BoundViolated : public Error {
 public:
  BoundViolated(const std::string& what, int level, int window)
      : Error(what), level_(level), window_(window) {}
  int level() const { return level_; }
  int window() const { return window_; }

 private:
  int level_;
  int window_;
};

class RootOfUnity : public Error {
 public:
  using Error::Error;
};

class ConditionCViolation : public Error {
 public:
  using Error::Error;
};

/// Precondition failure in a public operation.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace rotcode
