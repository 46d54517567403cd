#pragma once

// Reference computations for the test suite. They avoid the library's ball
// arithmetic: integer and rational recurrences, or plain MPFR at a large
// working precision.

#include <gmpxx.h>
#include <mpfr.h>

#include <cmath>
#include <string>
#include <vector>

namespace oracle {

/// Partial quotients of (P + sqrt(D)) / Q by the integer recurrence for
/// quadratic surds. Requires Q | D - P^2.
inline std::vector<long> surd_quotients(long P, long D, long Q, int count) {
  std::vector<long> out;
  for (int k = 0; k < count; ++k) {
    long a = static_cast<long>(std::floor((P + std::sqrt(static_cast<double>(D))) / Q));
    // Exact floor: adjust with integer tests of (P + sqrt D) / Q against a.
    auto ge = [&](long t) {
      // (P + sqrt D) / Q >= t  <=>  sqrt D >= t Q - P (Q > 0).
      long rhs = t * Q - P;
      if (rhs <= 0) return true;
      return D >= rhs * rhs;
    };
    while (!ge(a)) --a;
    while (ge(a + 1)) ++a;
    out.push_back(a);
    P = a * Q - P;
    Q = (D - P * P) / Q;
  }
  return out;
}

/// Plain-MPFR scalar with a fixed working precision.
struct Hp {
  mpfr_t v;
  explicit Hp(mpfr_prec_t p = 2048) { mpfr_init2(v, p); }
  Hp(const Hp& o) {
    mpfr_init2(v, mpfr_get_prec(o.v));
    mpfr_set(v, o.v, MPFR_RNDN);
  }
  Hp& operator=(const Hp& o) {
    mpfr_set_prec(v, mpfr_get_prec(o.v));
    mpfr_set(v, o.v, MPFR_RNDN);
    return *this;
  }
  ~Hp() { mpfr_clear(v); }
  double d() const { return mpfr_get_d(v, MPFR_RNDN); }
};

/// (sqrt(5) - 1) / 2 in plain MPFR.
inline Hp golden(mpfr_prec_t p = 2048) {
  Hp x(p);
  mpfr_sqrt_ui(x.v, 5, MPFR_RNDN);
  mpfr_sub_ui(x.v, x.v, 1, MPFR_RNDN);
  mpfr_div_2ui(x.v, x.v, 1, MPFR_RNDN);
  return x;
}

/// arccos(num / den) / pi in plain MPFR.
inline Hp acos_over_pi(long num, long den, mpfr_prec_t p = 2048) {
  Hp x(p), pi(p);
  mpfr_set_si(x.v, num, MPFR_RNDN);
  mpfr_div_si(x.v, x.v, den, MPFR_RNDN);
  mpfr_acos(x.v, x.v, MPFR_RNDN);
  mpfr_const_pi(pi.v, MPFR_RNDN);
  mpfr_div(x.v, x.v, pi.v, MPFR_RNDN);
  return x;
}

/// Sign of frac(n x) - r, decided in plain MPFR; `x` should carry far more
/// bits than log2(n).
inline bool frac_ge(const Hp& x, unsigned long n, double r) {
  Hp t(mpfr_get_prec(x.v));
  mpfr_mul_ui(t.v, x.v, n, MPFR_RNDN);
  mpfr_frac(t.v, t.v, MPFR_RNDN);
  return mpfr_cmp_d(t.v, r) >= 0;
}

}  // namespace oracle

namespace oracle {

/// Letters of the rotation coding by plain MPFR, cuts sorted ascending.
inline std::vector<int> letters(const Hp& t, const std::vector<Hp>& cuts, std::size_t count) {
  std::vector<int> out;
  Hp x(mpfr_get_prec(t.v));
  for (std::size_t n = 0; n < count; ++n) {
    mpfr_mul_ui(x.v, t.v, n, MPFR_RNDN);
    mpfr_frac(x.v, x.v, MPFR_RNDN);
    int k = 0;
    for (const auto& c : cuts) k += mpfr_cmp(x.v, c.v) >= 0;
    out.push_back(k);
  }
  return out;
}

inline Hp from_double(double v, mpfr_prec_t p = 2048) {
  Hp x(p);
  mpfr_set_d(x.v, v, MPFR_RNDN);
  return x;
}

/// Exact Gaussian rational.
struct Gauss {
  mpq_class re = 0, im = 0;
  Gauss operator+(const Gauss& o) const { return {re + o.re, im + o.im}; }
  Gauss operator-(const Gauss& o) const { return {re - o.re, im - o.im}; }
  Gauss operator*(const Gauss& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
  Gauss inv() const {
    mpq_class n = re * re + im * im;
    return {re / n, -im / n};
  }
  Gauss operator/(const Gauss& o) const { return *this * o.inv(); }
};

inline Gauss gpow(Gauss z, long k) {
  if (k < 0) return gpow(z.inv(), -k);
  Gauss r{1, 0};
  while (k--) r = r * z;
  return r;
}

}  // namespace oracle

namespace oracle {

/// sum_n u[a_n] 2^-n in plain MPFR.
inline Hp binary_sum(const std::vector<int>& a, const std::vector<long>& u, mpfr_prec_t p = 2048) {
  Hp s(p), term(p);
  mpfr_set_zero(s.v, 1);
  for (std::size_t n = 0; n < a.size(); ++n) {
    mpfr_set_si_2exp(term.v, u[static_cast<std::size_t>(a[n])], -static_cast<long>(n), MPFR_RNDN);
    mpfr_add(s.v, s.v, term.v, MPFR_RNDN);
  }
  return s;
}

/// sum_{n >= 0} 2^-floor(n x + r) over exponents below `limit`.
inline Hp binary_beatty_sum(const Hp& x, const Hp& r, long limit) {
  const mpfr_prec_t p = mpfr_get_prec(x.v);
  Hp s(p), y(p), term(p);
  mpfr_set_zero(s.v, 1);
  for (unsigned long n = 0;; ++n) {
    mpfr_mul_ui(y.v, x.v, n, MPFR_RNDN);
    mpfr_add(y.v, y.v, r.v, MPFR_RNDN);
    mpfr_floor(y.v, y.v);
    long e = mpfr_get_si(y.v, MPFR_RNDN);
    if (e >= limit) break;
    mpfr_set_si_2exp(term.v, 1, -e, MPFR_RNDN);
    mpfr_add(s.v, s.v, term.v, MPFR_RNDN);
  }
  return s;
}

}  // namespace oracle
