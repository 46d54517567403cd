#pragma once

#include <gmpxx.h>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <type_traits>

#include "rotcode/ball.hpp"
#include "rotcode/complex.hpp"
#include "rotcode/error.hpp"

namespace rotcode {

/// Process-wide cap on working precision (bits). Default 2^16.
long precision_cap();
void set_precision_cap(long bits);

/// Runs `attempt(bits)` at bits = start, 2*start, ... up to precision_cap()
/// until it yields a value. Throws PrecisionExhausted naming `what` otherwise.
template <class F>
auto escalate(long start, F&& attempt, const std::string& what) {
  using Opt = std::invoke_result_t<F&, long>;
  const long cap = precision_cap();
  for (long bits = std::min(start, cap);; bits = std::min(2 * bits, cap)) {
    Opt r = attempt(bits);
    if (r) return std::move(*r);
    if (bits >= cap) break;
  }
  throw PrecisionExhausted(what + " undecided at the precision cap of " + std::to_string(cap) + " bits");
}

/// Sequence a_0, a_1, ... of partial quotients.
using QuotientFn = std::function<mpz_class(std::size_t)>;

/// An irrational real number available as enclosures of any requested
/// precision. Copies share one immutable description and a small cache.
class ThetaOracle {
 public:
  enum class Kind { DecimalLiteral, Quadratic, LogRatio, QuotientList, Reciprocal };

  /// Positive root of x^2 + x - 1, i.e. (sqrt(5) - 1) / 2.
  static ThetaOracle golden();
  /// Root (-b +/- sqrt(b^2 - 4ac)) / 2a. The discriminant must be a positive
  /// non-square.
  static ThetaOracle quadratic(const mpz_class& a, const mpz_class& b, const mpz_class& c, bool plus_root);
  /// sqrt(D) - floor(sqrt(D)).
  static ThetaOracle sqrt_frac(const mpz_class& d);
  /// An opaque number known to agree with `digits` (a decimal literal) to the
  /// literal's last place. With `exact` the literal is claimed to be the value
  /// itself, which is rational, so construction fails.
  static ThetaOracle decimal(const std::string& digits, bool exact = false);
  /// scale * log(z1) / log(z2) for two points on the unit circle (ratio of
  /// arguments) or two positive rationals.
  static ThetaOracle log_ratio(const ComplexRational& z1, const ComplexRational& z2,
                               const mpq_class& scale = 1);
  /// [a_0; a_1, a_2, ...] from an explicit quotient rule.
  static ThetaOracle from_quotients(QuotientFn quotients, std::string label);
  /// 1 / x.
  static ThetaOracle reciprocal(const ThetaOracle& x);

  /// Parses the mini-language: golden, sqrt:D, quad:a,b,c:+|-,
  /// logratio:re1,im1,re2,im2, dec:<digits>[:exact], cfgen:affine:A,B
  /// (a_0 = 0, a_m = A + B m), cfgen:pow:B (a_0 = 0, a_m = B^m).
  static ThetaOracle parse(const std::string& spec);

  /// Ball containing the number with radius <= 2^(1 - bits).
  BallReal refine(long bits) const;
  /// Ball of frac(x) with radius <= 2^(1 - bits).
  BallReal refine_frac(long bits) const;

  Kind kind() const;
  const std::string& spec() const;
  /// Partial quotients when the number was built from them.
  const QuotientFn* quotients() const;

 private:
  struct Impl;
  explicit ThetaOracle(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<Impl> impl_;
};

}  // namespace rotcode
