#pragma once

#include <gmpxx.h>

#include <string>

#include "rotcode/ball.hpp"

namespace rotcode {

/// Exact element of Q(i). Used for digit values, weights and unit-circle
/// points such as e^{i theta} = (3+4i)/5.
struct ComplexRational {
  mpq_class re{0};
  mpq_class im{0};

  ComplexRational() = default;
  ComplexRational(long r) : re(r) {}
  ComplexRational(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) {
    re.canonicalize();
    im.canonicalize();
  }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }
  mpq_class norm2() const { return re * re + im * im; }
  ComplexRational conj() const { return {re, -im}; }

  friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend ComplexRational operator+(const ComplexRational& a, const ComplexRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend ComplexRational operator-(const ComplexRational& a, const ComplexRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend ComplexRational operator-(const ComplexRational& a) { return {-a.re, -a.im}; }
  friend ComplexRational operator*(const ComplexRational& a, const ComplexRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }

  /// "p/q", "p/q+r/si" style text; also accepts a bare rational.
  std::string to_string() const;
};

ComplexRational pow(const ComplexRational& z, unsigned long k);

/// Parses "re" or "re,im" with rational components ("3/5,4/5", "-1", "0.25").
ComplexRational parse_complex_rational(const std::string& text);

class BallComplex {
 public:
  explicit BallComplex(mpfr_prec_t prec = 64) : re_(prec), im_(prec) {}
  BallComplex(BallReal re, BallReal im) : re_(std::move(re)), im_(std::move(im)) {}
  static BallComplex from(const ComplexRational& z, mpfr_prec_t prec);
  static BallComplex from_real(BallReal re) {
    BallReal im(re.prec());
    return {std::move(re), std::move(im)};
  }

  const BallReal& re() const { return re_; }
  const BallReal& im() const { return im_; }
  mpfr_prec_t prec() const { return std::max(re_.prec(), im_.prec()); }

  BallComplex conj() const { return {re_, -im_}; }
  /// |z|^2 as a ball.
  BallReal norm2() const { return re_ * re_ + im_ * im_; }
  BallReal abs() const;
  /// Upper bound of max(rad(re), rad(im)) * sqrt(2), i.e. a disc radius.
  Mpfr radius_upper() const;
  bool contains_zero() const { return re_.contains_zero() && im_.contains_zero(); }
  bool overlaps(const BallComplex& o) const { return re_.overlaps(o.re_) && im_.overlaps(o.im_); }
  BallComplex with_prec(mpfr_prec_t p) const { return {re_.with_prec(p), im_.with_prec(p)}; }
  BallComplex inflate(const Mpfr& r) const { return {re_.inflate(r), im_.inflate(r)}; }

  std::string to_string(int digits = 20) const;

  friend BallComplex operator-(const BallComplex& a) { return {-a.re_, -a.im_}; }
  friend BallComplex operator+(const BallComplex& a, const BallComplex& b) {
    return {a.re_ + b.re_, a.im_ + b.im_};
  }
  friend BallComplex operator-(const BallComplex& a, const BallComplex& b) {
    return {a.re_ - b.re_, a.im_ - b.im_};
  }
  friend BallComplex operator*(const BallComplex& a, const BallComplex& b) {
    return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
  }
  friend BallComplex operator*(const BallComplex& a, const BallReal& s) {
    return {a.re_ * s, a.im_ * s};
  }
  friend BallComplex operator/(const BallComplex& a, const BallComplex& b);

  BallComplex& operator+=(const BallComplex& b) { return *this = *this + b; }
  BallComplex& operator-=(const BallComplex& b) { return *this = *this - b; }
  BallComplex& operator*=(const BallComplex& b) { return *this = *this * b; }

 private:
  BallReal re_;
  BallReal im_;
};

BallComplex pow(const BallComplex& z, unsigned long k);
BallComplex inverse(const BallComplex& z);

}  // namespace rotcode
