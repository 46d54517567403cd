#include "rotcode/complex.hpp"

#include <algorithm>

#include "rotcode/error.hpp"

namespace rotcode {

std::string ComplexRational::to_string() const {
  if (im == 0) return re.get_str();
  std::string s = re.get_str();
  s += im < 0 ? "-" : "+";
  mpq_class a = abs(im);
  s += a.get_str() + "i";
  return s;
}

ComplexRational pow(const ComplexRational& z, unsigned long k) {
  ComplexRational result(1);
  ComplexRational base = z;
  while (k) {
    if (k & 1) result = result * base;
    base = base * base;
    k >>= 1;
  }
  return result;
}

ComplexRational parse_complex_rational(const std::string& text) {
  auto comma = text.find(',');
  if (comma == std::string::npos) return ComplexRational(parse_rational(text));
  return ComplexRational(parse_rational(text.substr(0, comma)), parse_rational(text.substr(comma + 1)));
}

BallComplex BallComplex::from(const ComplexRational& z, mpfr_prec_t prec) {
  return {BallReal::from_mpq(z.re, prec), BallReal::from_mpq(z.im, prec)};
}

BallReal BallComplex::abs() const { return sqrt(norm2()); }

Mpfr BallComplex::radius_upper() const {
  Mpfr r(kRadiusPrec);
  mpfr_hypot(r.get(), re_.rad().get(), im_.rad().get(), MPFR_RNDU);
  return r;
}

std::string BallComplex::to_string(int digits) const {
  return "(" + re_.to_string(digits) + ") + i(" + im_.to_string(digits) + ")";
}

BallComplex operator/(const BallComplex& a, const BallComplex& b) {
  BallReal d = b.norm2();
  if (d.contains_zero()) throw PrecisionExhausted("complex division by a ball containing zero");
  BallComplex n = a * b.conj();
  return {n.re() / d, n.im() / d};
}

BallComplex inverse(const BallComplex& z) {
  BallReal d = z.norm2();
  if (d.contains_zero()) throw PrecisionExhausted("complex inverse of a ball containing zero");
  return {z.re() / d, -z.im() / d};
}

BallComplex pow(const BallComplex& z, unsigned long k) {
  BallComplex result = BallComplex::from(ComplexRational(1), z.prec());
  BallComplex base = z;
  while (k) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

}  // namespace rotcode
