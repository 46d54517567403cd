#pragma once

// Midpoint-radius (ball) arithmetic over MPFR.
//
// A BallReal [m +/- r] stands for every real x with |x - m| <= r. Each
// operation rounds its midpoint to nearest and widens the radius by the
// propagated input radii plus one ulp of the rounding error, with every
// radius computation rounded upward. The result therefore always contains
// the exact image of the input balls.

#include <gmpxx.h>
#include <mpfr.h>

#include <optional>
#include <string>

namespace rotcode {

/// Owning RAII wrapper for mpfr_t.
class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec = 64);
  Mpfr(const Mpfr& other);
  Mpfr(Mpfr&& other) noexcept;
  Mpfr& operator=(const Mpfr& other);
  Mpfr& operator=(Mpfr&& other) noexcept;
  ~Mpfr();

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

 private:
  mpfr_t v_;
};

/// Precision of every radius. Radii only need a handful of correct bits.
inline constexpr mpfr_prec_t kRadiusPrec = 32;

enum class Ordering3 { Less, Greater, Undecided };

class BallReal {
 public:
  /// Exact zero.
  explicit BallReal(mpfr_prec_t prec = 64);
  BallReal(Mpfr mid, Mpfr rad);

  static BallReal from_int(long v, mpfr_prec_t prec = 64);
  static BallReal from_mpz(const mpz_class& v, mpfr_prec_t prec);
  static BallReal from_mpq(const mpq_class& v, mpfr_prec_t prec);
  /// Ball [mid - rad, mid + rad] from a rational midpoint and radius.
  static BallReal from_mpq(const mpq_class& mid, const mpq_class& rad, mpfr_prec_t prec);
  static BallReal pi(mpfr_prec_t prec);
  /// Smallest representable ball covering [lo, hi].
  static BallReal from_bounds(const Mpfr& lo, const Mpfr& hi, mpfr_prec_t prec);

  const Mpfr& mid() const { return mid_; }
  const Mpfr& rad() const { return rad_; }
  mpfr_prec_t prec() const { return mid_.prec(); }

  /// Guaranteed lower / upper endpoint (directed rounding).
  Mpfr lower() const;
  Mpfr upper() const;

  bool contains_zero() const;
  bool contains(const BallReal& other) const;
  bool overlaps(const BallReal& other) const;
  /// True when the radius is at most 2^e.
  bool radius_le_pow2(long e) const;
  /// True when the radius is at most |bound| (upper endpoint of `bound`).
  bool radius_le(const BallReal& bound) const;
  /// Upper bound on |x|, at radius precision.
  Mpfr abs_upper() const;
  /// Lower bound on |x| (zero when the ball contains zero).
  Mpfr abs_lower() const;

  /// floor(x) when the ball lies inside one unit interval [k, k+1).
  std::optional<mpz_class> floor() const;
  /// x - floor(x) when floor is decided.
  std::optional<BallReal> frac() const;

  BallReal with_prec(mpfr_prec_t prec) const;
  /// Same midpoint, radius widened by `extra` (rounded up).
  BallReal inflate(const Mpfr& extra) const;

  double mid_double() const { return mid_.to_double(); }
  double rad_double() const { return rad_.to_double(); }

  /// Midpoint with `digits` significant decimal digits plus a radius bound,
  /// e.g. "6.1803398874989e-1 +/- 2.1e-20".
  std::string to_string(int digits = 20) const;
  /// Fixed-point decimal of the midpoint with `decimals` fractional digits.
  std::string mid_decimal(int decimals) const;
  /// ceil(log10(radius)); a large negative number for an exact ball.
  long error_exponent10() const;

  friend BallReal operator-(const BallReal& a);
  friend BallReal operator+(const BallReal& a, const BallReal& b);
  friend BallReal operator-(const BallReal& a, const BallReal& b);
  friend BallReal operator*(const BallReal& a, const BallReal& b);
  friend BallReal operator/(const BallReal& a, const BallReal& b);
  friend BallReal operator*(const BallReal& a, const mpz_class& k);
  friend BallReal operator*(const BallReal& a, long k);

  BallReal& operator+=(const BallReal& b) { return *this = *this + b; }
  BallReal& operator-=(const BallReal& b) { return *this = *this - b; }
  BallReal& operator*=(const BallReal& b) { return *this = *this * b; }

 private:
  Mpfr mid_;
  Mpfr rad_;
};

BallReal abs(const BallReal& x);
BallReal sqrt(const BallReal& x);
BallReal exp(const BallReal& x);
BallReal log(const BallReal& x);
BallReal sin(const BallReal& x);
BallReal cos(const BallReal& x);
/// Argument of (x, y) in (-pi, pi]. Throws PrecisionExhausted when the box
/// touches the origin or straddles the branch cut on the negative axis.
BallReal atan2(const BallReal& y, const BallReal& x);
/// Multiply by 2^e exactly.
BallReal ldexp(const BallReal& x, long e);

/// LESS / GREATER only for disjoint balls.
Ordering3 certified_compare(const BallReal& x, const BallReal& y);

/// Decimal or p/q string to an exact rational. Throws InvalidArgument.
mpq_class parse_rational(const std::string& text);

}  // namespace rotcode
