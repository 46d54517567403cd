#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rotcode/ball.hpp"
#include "rotcode/complex.hpp"

namespace rotcode {

/// An exact base b in Q(i) with |b| > 1.
class Base {
 public:
  /// Throws InvalidArgument unless |b|^2 > 1.
  explicit Base(ComplexRational b);
  /// "2", "3/2", "6/5,8/5", or "2@3/5,4/5" (modulus times a unit-circle point).
  static Base parse(const std::string& text);

  const ComplexRational& value() const { return b_; }
  const ComplexRational& inverse() const { return inv_; }
  bool is_real() const { return b_.is_real(); }
  /// |b|^2, exact.
  const mpq_class& norm2() const { return norm2_; }
  BallReal modulus(mpfr_prec_t prec) const;
  /// log2 |b| rounded down, as a double.
  double log2_modulus() const { return log2_mod_; }
  /// |b|^(-k) as a ball.
  BallReal modulus_pow_neg(long k, mpfr_prec_t prec) const;
  /// b^k for any integer k.
  BallComplex pow(long k, mpfr_prec_t prec) const;
  std::string to_string() const { return b_.to_string(); }

 private:
  ComplexRational b_;
  ComplexRational inv_;
  mpq_class norm2_;
  double log2_mod_ = 0;
};

/// Sum_{j < N} values[letters[j]] * b^(-j) at working precision `prec`,
/// evaluated by Horner's rule. The radius covers all rounding; the series
/// tail beyond N is not included.
BallComplex digit_sum(const Base& b, const std::vector<int>& letters, const std::vector<ComplexRational>& values,
                      mpfr_prec_t prec);

/// Sum_{m < N} coeffs[m] * b^(-m), same conventions as digit_sum.
BallComplex coefficient_sum(const Base& b, const std::vector<ComplexRational>& coeffs, mpfr_prec_t prec);

/// Upper bound of H |b|^(-N) |b| / (|b| - 1), the tail of a digit series
/// with |digit| <= H past N terms.
Mpfr tail_bound(const Base& b, const Mpfr& H, std::uint64_t N);

/// Upper bound of max |values[i]|.
Mpfr max_abs(const std::vector<ComplexRational>& values);

}  // namespace rotcode
