#include "rotcode/digits.hpp"

#include <algorithm>
#include <cmath>

#include "rotcode/error.hpp"

namespace rotcode {

namespace {

Mpfr q_up(const mpq_class& q) {
  Mpfr r(64);
  mpfr_set_q(r.get(), q.get_mpq_t(), MPFR_RNDU);
  return r;
}

Mpfr q_down(const mpq_class& q) {
  Mpfr r(64);
  mpfr_set_q(r.get(), q.get_mpq_t(), MPFR_RNDD);
  return r;
}

// Upper bound of |1/b| and lower bound of 1 - |1/b|.
std::pair<Mpfr, Mpfr> inverse_modulus(const Base& b) {
  Mpfr beta = q_up(mpq_class(1) / b.norm2());
  mpfr_sqrt(beta.get(), beta.get(), MPFR_RNDU);
  Mpfr gap(64);
  mpfr_ui_sub(gap.get(), 1, beta.get(), MPFR_RNDD);
  return {beta, gap};
}

}  // namespace

Base::Base(ComplexRational b) : b_(std::move(b)) {
  norm2_ = b_.norm2();
  if (norm2_ <= 1) throw InvalidArgument("base " + b_.to_string() + " does not satisfy |b| > 1");
  inv_ = ComplexRational(b_.re / norm2_, -b_.im / norm2_);
  Mpfr l = q_down(norm2_);
  mpfr_log2(l.get(), l.get(), MPFR_RNDD);
  log2_mod_ = mpfr_get_d(l.get(), MPFR_RNDD) / 2;
}

Base Base::parse(const std::string& text) {
  auto at = text.find('@');
  if (at == std::string::npos) return Base(parse_complex_rational(text));
  mpq_class modulus = parse_rational(text.substr(0, at));
  ComplexRational z = parse_complex_rational(text.substr(at + 1));
  if (z.norm2() != 1) throw InvalidArgument("'" + text.substr(at + 1) + "' is not on the unit circle");
  return Base(ComplexRational(modulus) * z);
}

BallReal Base::modulus(mpfr_prec_t prec) const { return sqrt(BallReal::from_mpq(norm2_, prec)); }

BallReal Base::modulus_pow_neg(long k, mpfr_prec_t prec) const {
  if (k < 0) throw InvalidArgument("negative exponent");
  mpq_class inv = 1 / norm2_;
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), inv.get_num_mpz_t(), static_cast<unsigned long>(k / 2));
  mpz_pow_ui(den.get_mpz_t(), inv.get_den_mpz_t(), static_cast<unsigned long>(k / 2));
  BallReal r = BallReal::from_mpq(mpq_class(num, den), prec);
  if (k % 2) r = r / modulus(prec);
  return r;
}

BallComplex Base::pow(long k, mpfr_prec_t prec) const {
  if (k >= 0) return rotcode::pow(BallComplex::from(b_, prec), static_cast<unsigned long>(k));
  return rotcode::pow(BallComplex::from(inv_, prec), static_cast<unsigned long>(-k));
}

Mpfr max_abs(const std::vector<ComplexRational>& values) {
  Mpfr h(64);
  mpfr_set_zero(h.get(), 1);
  for (const auto& v : values) {
    Mpfr a = q_up(v.norm2());
    mpfr_sqrt(a.get(), a.get(), MPFR_RNDU);
    mpfr_max(h.get(), h.get(), a.get(), MPFR_RNDU);
  }
  return h;
}

Mpfr tail_bound(const Base& b, const Mpfr& H, std::uint64_t N) {
  auto [beta, gap] = inverse_modulus(b);
  Mpfr t(64);
  mpfr_pow_ui(t.get(), beta.get(), N, MPFR_RNDU);
  mpfr_mul(t.get(), t.get(), H.get(), MPFR_RNDU);
  mpfr_div(t.get(), t.get(), gap.get(), MPFR_RNDU);
  return t;
}

namespace {

template <class Get>
BallComplex horner(const Base& b, std::size_t n, Get get, bool real, const Mpfr& H, mpfr_prec_t prec) {
  const mpq_class& br = b.inverse().re;
  const mpq_class& bi = b.inverse().im;
  Mpfr xr(prec), xi(prec), t1(prec), t2(prec);
  mpfr_set_zero(xr.get(), 1);
  mpfr_set_zero(xi.get(), 1);
  for (std::size_t k = n; k-- > 0;) {
    const ComplexRational& v = get(k);
    if (real) {
      mpfr_mul_q(xr.get(), xr.get(), br.get_mpq_t(), MPFR_RNDN);
    } else {
      mpfr_mul_q(t1.get(), xr.get(), br.get_mpq_t(), MPFR_RNDN);
      mpfr_mul_q(t2.get(), xi.get(), bi.get_mpq_t(), MPFR_RNDN);
      mpfr_sub(t1.get(), t1.get(), t2.get(), MPFR_RNDN);
      mpfr_mul_q(t2.get(), xr.get(), bi.get_mpq_t(), MPFR_RNDN);
      mpfr_mul_q(xi.get(), xi.get(), br.get_mpq_t(), MPFR_RNDN);
      mpfr_add(xi.get(), xi.get(), t2.get(), MPFR_RNDN);
      mpfr_swap(xr.get(), t1.get());
      if (v.im != 0) mpfr_add_q(xi.get(), xi.get(), v.im.get_mpq_t(), MPFR_RNDN);
    }
    if (v.re != 0) mpfr_add_q(xr.get(), xr.get(), v.re.get_mpq_t(), MPFR_RNDN);
  }
  // Each step rounds at most four times at magnitude <= X = H / (1 - |1/b|);
  // the error carried from earlier steps shrinks by |1/b| per step.
  auto [beta, gap] = inverse_modulus(b);
  Mpfr e(64);
  mpfr_div(e.get(), H.get(), gap.get(), MPFR_RNDU);
  mpfr_mul_ui(e.get(), e.get(), 12, MPFR_RNDU);
  mpfr_div(e.get(), e.get(), gap.get(), MPFR_RNDU);
  mpfr_mul_2si(e.get(), e.get(), 1 - static_cast<long>(prec), MPFR_RNDU);
  Mpfr rad(kRadiusPrec);
  mpfr_set(rad.get(), e.get(), MPFR_RNDU);
  BallReal re(std::move(xr), rad);
  BallReal im = real ? BallReal(prec) : BallReal(std::move(xi), rad);
  return {std::move(re), std::move(im)};
}

}  // namespace

BallComplex digit_sum(const Base& b, const std::vector<int>& letters, const std::vector<ComplexRational>& values,
                      mpfr_prec_t prec) {
  const bool real = b.is_real() && std::all_of(values.begin(), values.end(), [](const auto& v) { return v.is_real(); });
  return horner(
      b, letters.size(), [&](std::size_t k) -> const ComplexRational& { return values[static_cast<std::size_t>(letters[k])]; },
      real, max_abs(values), prec);
}

BallComplex coefficient_sum(const Base& b, const std::vector<ComplexRational>& coeffs, mpfr_prec_t prec) {
  const bool real = b.is_real() && std::all_of(coeffs.begin(), coeffs.end(), [](const auto& v) { return v.is_real(); });
  return horner(
      b, coeffs.size(), [&](std::size_t k) -> const ComplexRational& { return coeffs[k]; }, real, max_abs(coeffs), prec);
}

}  // namespace rotcode
