#include "rotcode/ball.hpp"

#include <algorithm>
#include <climits>
#include <cstdlib>
#include <utility>

#include "rotcode/error.hpp"

namespace rotcode {

Mpfr::Mpfr(mpfr_prec_t prec) {
  mpfr_init2(v_, prec);
  mpfr_set_zero(v_, 1);
}

Mpfr::Mpfr(const Mpfr& other) {
  mpfr_init2(v_, other.prec());
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

Mpfr::Mpfr(Mpfr&& other) noexcept {
  mpfr_init2(v_, MPFR_PREC_MIN);
  mpfr_swap(v_, other.v_);
}

Mpfr& Mpfr::operator=(const Mpfr& other) {
  if (this != &other) {
    mpfr_set_prec(v_, other.prec());
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

Mpfr& Mpfr::operator=(Mpfr&& other) noexcept {
  if (this != &other) mpfr_swap(v_, other.v_);
  return *this;
}

Mpfr::~Mpfr() { mpfr_clear(v_); }

namespace {

Mpfr radius() { return Mpfr(kRadiusPrec); }

// Widen `rad` by one ulp of `mid` when the midpoint computation was inexact.
void add_rounding(Mpfr& rad, const Mpfr& mid, int ternary) {
  if (ternary == 0 || !mpfr_regular_p(mid.get())) return;
  Mpfr ulp = radius();
  mpfr_set_ui_2exp(ulp.get(), 1, mpfr_get_exp(mid.get()) - mid.prec(), MPFR_RNDU);
  mpfr_add(rad.get(), rad.get(), ulp.get(), MPFR_RNDU);
}

Mpfr abs_up(const Mpfr& x) {
  Mpfr r = radius();
  mpfr_abs(r.get(), x.get(), MPFR_RNDU);
  return r;
}

Mpfr abs_down(const Mpfr& x) {
  Mpfr r = radius();
  mpfr_abs(r.get(), x.get(), MPFR_RNDD);
  return r;
}

mpfr_prec_t max_prec(const BallReal& a, const BallReal& b) { return std::max(a.prec(), b.prec()); }

}  // namespace

BallReal::BallReal(mpfr_prec_t prec) : mid_(prec), rad_(kRadiusPrec) {}

BallReal::BallReal(Mpfr mid, Mpfr rad) : mid_(std::move(mid)), rad_(std::move(rad)) {
  if (rad_.prec() != kRadiusPrec) {
    Mpfr r = radius();
    mpfr_set(r.get(), rad_.get(), MPFR_RNDU);
    rad_ = std::move(r);
  }
  if (mpfr_sgn(rad_.get()) < 0) mpfr_set_zero(rad_.get(), 1);
}

BallReal BallReal::from_int(long v, mpfr_prec_t prec) {
  BallReal b(prec);
  int t = mpfr_set_si(b.mid_.get(), v, MPFR_RNDN);
  add_rounding(b.rad_, b.mid_, t);
  return b;
}

BallReal BallReal::from_mpz(const mpz_class& v, mpfr_prec_t prec) {
  BallReal b(prec);
  int t = mpfr_set_z(b.mid_.get(), v.get_mpz_t(), MPFR_RNDN);
  add_rounding(b.rad_, b.mid_, t);
  return b;
}

BallReal BallReal::from_mpq(const mpq_class& v, mpfr_prec_t prec) {
  BallReal b(prec);
  int t = mpfr_set_q(b.mid_.get(), v.get_mpq_t(), MPFR_RNDN);
  add_rounding(b.rad_, b.mid_, t);
  return b;
}

BallReal BallReal::from_mpq(const mpq_class& mid, const mpq_class& rad, mpfr_prec_t prec) {
  BallReal b = from_mpq(mid, prec);
  Mpfr r = radius();
  mpq_class ar = abs(rad);
  mpfr_set_q(r.get(), ar.get_mpq_t(), MPFR_RNDU);
  return b.inflate(r);
}

BallReal BallReal::pi(mpfr_prec_t prec) {
  BallReal b(prec);
  int t = mpfr_const_pi(b.mid_.get(), MPFR_RNDN);
  add_rounding(b.rad_, b.mid_, t);
  return b;
}

BallReal BallReal::from_bounds(const Mpfr& lo, const Mpfr& hi, mpfr_prec_t prec) {
  Mpfr m(prec);
  mpfr_add(m.get(), lo.get(), hi.get(), MPFR_RNDN);
  mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
  Mpfr a = radius();
  Mpfr b = radius();
  mpfr_sub(a.get(), hi.get(), m.get(), MPFR_RNDU);
  mpfr_sub(b.get(), m.get(), lo.get(), MPFR_RNDU);
  mpfr_max(a.get(), a.get(), b.get(), MPFR_RNDU);
  return BallReal(std::move(m), std::move(a));
}

Mpfr BallReal::lower() const {
  Mpfr l(prec());
  mpfr_sub(l.get(), mid_.get(), rad_.get(), MPFR_RNDD);
  return l;
}

Mpfr BallReal::upper() const {
  Mpfr u(prec());
  mpfr_add(u.get(), mid_.get(), rad_.get(), MPFR_RNDU);
  return u;
}

bool BallReal::contains_zero() const {
  return mpfr_sgn(lower().get()) <= 0 && mpfr_sgn(upper().get()) >= 0;
}

bool BallReal::contains(const BallReal& other) const {
  return mpfr_lessequal_p(lower().get(), other.lower().get()) &&
         mpfr_greaterequal_p(upper().get(), other.upper().get());
}

bool BallReal::overlaps(const BallReal& other) const {
  return mpfr_lessequal_p(lower().get(), other.upper().get()) &&
         mpfr_lessequal_p(other.lower().get(), upper().get());
}

bool BallReal::radius_le_pow2(long e) const {
  Mpfr p = radius();
  mpfr_set_ui_2exp(p.get(), 1, e, MPFR_RNDN);
  return mpfr_lessequal_p(rad_.get(), p.get());
}

bool BallReal::radius_le(const BallReal& bound) const {
  return mpfr_lessequal_p(rad_.get(), bound.abs_lower().get());
}

Mpfr BallReal::abs_upper() const {
  Mpfr r = abs_up(mid_);
  mpfr_add(r.get(), r.get(), rad_.get(), MPFR_RNDU);
  return r;
}

Mpfr BallReal::abs_lower() const {
  Mpfr r = abs_down(mid_);
  mpfr_sub(r.get(), r.get(), rad_.get(), MPFR_RNDD);
  if (mpfr_sgn(r.get()) < 0) mpfr_set_zero(r.get(), 1);
  return r;
}

std::optional<mpz_class> BallReal::floor() const {
  Mpfr lo = lower();
  Mpfr hi = upper();
  if (!mpfr_number_p(lo.get()) || !mpfr_number_p(hi.get())) return std::nullopt;
  mpz_class a, b;
  mpfr_get_z(a.get_mpz_t(), lo.get(), MPFR_RNDD);
  mpfr_get_z(b.get_mpz_t(), hi.get(), MPFR_RNDD);
  if (a != b) return std::nullopt;
  return a;
}

std::optional<BallReal> BallReal::frac() const {
  auto k = floor();
  if (!k) return std::nullopt;
  BallReal r(prec());
  int t = mpfr_sub_z(r.mid_.get(), mid_.get(), k->get_mpz_t(), MPFR_RNDN);
  r.rad_ = rad_;
  add_rounding(r.rad_, r.mid_, t);
  return r;
}

BallReal BallReal::with_prec(mpfr_prec_t p) const {
  BallReal r(p);
  int t = mpfr_set(r.mid_.get(), mid_.get(), MPFR_RNDN);
  r.rad_ = rad_;
  add_rounding(r.rad_, r.mid_, t);
  return r;
}

BallReal BallReal::inflate(const Mpfr& extra) const {
  BallReal r = *this;
  Mpfr e = abs_up(extra);
  mpfr_add(r.rad_.get(), r.rad_.get(), e.get(), MPFR_RNDU);
  return r;
}

std::string BallReal::to_string(int digits) const {
  char* m = nullptr;
  char* r = nullptr;
  mpfr_asprintf(&m, "%.*RNe", std::max(digits - 1, 0), mid_.get());
  mpfr_asprintf(&r, "%.1RUe", rad_.get());
  std::string out = std::string(m) + " +/- " + r;
  mpfr_free_str(m);
  mpfr_free_str(r);
  return out;
}

std::string BallReal::mid_decimal(int decimals) const {
  char* m = nullptr;
  mpfr_asprintf(&m, "%.*RNf", decimals, mid_.get());
  std::string out(m);
  mpfr_free_str(m);
  return out;
}

long BallReal::error_exponent10() const {
  if (mpfr_zero_p(rad_.get())) return -1000000000L;
  Mpfr l = radius();
  mpfr_log10(l.get(), rad_.get(), MPFR_RNDU);
  return mpfr_get_si(l.get(), MPFR_RNDU);
}

BallReal operator-(const BallReal& a) {
  BallReal r = a;
  mpfr_neg(r.mid_.get(), a.mid_.get(), MPFR_RNDN);
  return r;
}

BallReal operator+(const BallReal& a, const BallReal& b) {
  Mpfr m(max_prec(a, b));
  int t = mpfr_add(m.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
  Mpfr r = radius();
  mpfr_add(r.get(), a.rad_.get(), b.rad_.get(), MPFR_RNDU);
  add_rounding(r, m, t);
  return BallReal(std::move(m), std::move(r));
}

BallReal operator-(const BallReal& a, const BallReal& b) {
  Mpfr m(max_prec(a, b));
  int t = mpfr_sub(m.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
  Mpfr r = radius();
  mpfr_add(r.get(), a.rad_.get(), b.rad_.get(), MPFR_RNDU);
  add_rounding(r, m, t);
  return BallReal(std::move(m), std::move(r));
}

BallReal operator*(const BallReal& a, const BallReal& b) {
  Mpfr m(max_prec(a, b));
  int t = mpfr_mul(m.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
  Mpfr r = abs_up(a.mid_);
  mpfr_mul(r.get(), r.get(), b.rad_.get(), MPFR_RNDU);
  Mpfr s = abs_up(b.mid_);
  mpfr_mul(s.get(), s.get(), a.rad_.get(), MPFR_RNDU);
  mpfr_add(r.get(), r.get(), s.get(), MPFR_RNDU);
  mpfr_mul(s.get(), a.rad_.get(), b.rad_.get(), MPFR_RNDU);
  mpfr_add(r.get(), r.get(), s.get(), MPFR_RNDU);
  add_rounding(r, m, t);
  return BallReal(std::move(m), std::move(r));
}

BallReal operator/(const BallReal& a, const BallReal& b) {
  Mpfr den = abs_down(b.mid_);
  Mpfr gap = radius();
  mpfr_sub(gap.get(), den.get(), b.rad_.get(), MPFR_RNDD);
  if (mpfr_sgn(gap.get()) <= 0) throw PrecisionExhausted("division by a ball containing zero");
  Mpfr m(max_prec(a, b));
  int t = mpfr_div(m.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
  Mpfr num = abs_up(a.mid_);
  mpfr_mul(num.get(), num.get(), b.rad_.get(), MPFR_RNDU);
  Mpfr s = abs_up(b.mid_);
  mpfr_mul(s.get(), s.get(), a.rad_.get(), MPFR_RNDU);
  mpfr_add(num.get(), num.get(), s.get(), MPFR_RNDU);
  mpfr_mul(den.get(), den.get(), gap.get(), MPFR_RNDD);
  Mpfr r = radius();
  mpfr_div(r.get(), num.get(), den.get(), MPFR_RNDU);
  add_rounding(r, m, t);
  return BallReal(std::move(m), std::move(r));
}

BallReal operator*(const BallReal& a, const mpz_class& k) {
  Mpfr m(a.prec());
  int t = mpfr_mul_z(m.get(), a.mid_.get(), k.get_mpz_t(), MPFR_RNDN);
  Mpfr r = radius();
  mpz_class ak = abs(k);
  mpfr_mul_z(r.get(), a.rad_.get(), ak.get_mpz_t(), MPFR_RNDU);
  add_rounding(r, m, t);
  return BallReal(std::move(m), std::move(r));
}

BallReal operator*(const BallReal& a, long k) {
  Mpfr m(a.prec());
  int t = mpfr_mul_si(m.get(), a.mid_.get(), k, MPFR_RNDN);
  Mpfr r = radius();
  mpfr_mul_ui(r.get(), a.rad_.get(), static_cast<unsigned long>(std::labs(k)), MPFR_RNDU);
  add_rounding(r, m, t);
  return BallReal(std::move(m), std::move(r));
}

BallReal abs(const BallReal& x) {
  if (mpfr_sgn(x.mid().get()) < 0) return -x;
  return x;
}

BallReal sqrt(const BallReal& x) {
  Mpfr hi = x.upper();
  if (mpfr_sgn(hi.get()) < 0) throw InvalidArgument("sqrt of a negative ball");
  Mpfr lo = x.lower();
  if (mpfr_sgn(lo.get()) <= 0) {
    // Enclose [0, sqrt(hi)].
    Mpfr s = radius();
    mpfr_sqrt(s.get(), hi.get(), MPFR_RNDU);
    Mpfr m(x.prec());
    mpfr_div_2ui(m.get(), s.get(), 1, MPFR_RNDN);
    Mpfr r = radius();
    mpfr_set(r.get(), m.get(), MPFR_RNDU);
    return BallReal(std::move(m), std::move(r));
  }
  Mpfr m(x.prec());
  int t = mpfr_sqrt(m.get(), x.mid().get(), MPFR_RNDN);
  Mpfr a = radius();
  mpfr_sqrt(a.get(), lo.get(), MPFR_RNDD);
  Mpfr b = radius();
  mpfr_sqrt(b.get(), x.mid().get(), MPFR_RNDD);
  mpfr_add(a.get(), a.get(), b.get(), MPFR_RNDD);
  Mpfr r = radius();
  mpfr_div(r.get(), x.rad().get(), a.get(), MPFR_RNDU);
  add_rounding(r, m, t);
  return BallReal(std::move(m), std::move(r));
}

BallReal exp(const BallReal& x) {
  Mpfr m(x.prec());
  int t = mpfr_exp(m.get(), x.mid().get(), MPFR_RNDN);
  Mpfr hi = x.upper();
  Mpfr r = radius();
  mpfr_exp(r.get(), hi.get(), MPFR_RNDU);
  mpfr_mul(r.get(), r.get(), x.rad().get(), MPFR_RNDU);
  add_rounding(r, m, t);
  return BallReal(std::move(m), std::move(r));
}

BallReal log(const BallReal& x) {
  Mpfr lo = x.lower();
  if (mpfr_sgn(lo.get()) <= 0) throw PrecisionExhausted("log of a ball touching zero");
  Mpfr m(x.prec());
  int t = mpfr_log(m.get(), x.mid().get(), MPFR_RNDN);
  Mpfr l = radius();
  mpfr_set(l.get(), lo.get(), MPFR_RNDD);
  Mpfr r = radius();
  mpfr_div(r.get(), x.rad().get(), l.get(), MPFR_RNDU);
  add_rounding(r, m, t);
  return BallReal(std::move(m), std::move(r));
}

BallReal sin(const BallReal& x) {
  Mpfr m(x.prec());
  int t = mpfr_sin(m.get(), x.mid().get(), MPFR_RNDN);
  Mpfr r = x.rad();
  add_rounding(r, m, t);
  return BallReal(std::move(m), std::move(r));
}

BallReal cos(const BallReal& x) {
  Mpfr m(x.prec());
  int t = mpfr_cos(m.get(), x.mid().get(), MPFR_RNDN);
  Mpfr r = x.rad();
  add_rounding(r, m, t);
  return BallReal(std::move(m), std::move(r));
}

BallReal atan2(const BallReal& y, const BallReal& x) {
  Mpfr dx = x.abs_lower();
  Mpfr dy = y.abs_lower();
  Mpfr mod = radius();
  mpfr_hypot(mod.get(), dx.get(), dy.get(), MPFR_RNDD);
  if (mpfr_zero_p(mod.get())) throw PrecisionExhausted("argument of a box touching the origin");
  if (y.contains_zero() && mpfr_sgn(x.lower().get()) < 0)
    throw PrecisionExhausted("argument of a box meeting the negative real axis");
  Mpfr m(max_prec(x, y));
  int t = mpfr_atan2(m.get(), y.mid().get(), x.mid().get(), MPFR_RNDN);
  Mpfr r = radius();
  mpfr_add(r.get(), x.rad().get(), y.rad().get(), MPFR_RNDU);
  mpfr_div(r.get(), r.get(), mod.get(), MPFR_RNDU);
  add_rounding(r, m, t);
  return BallReal(std::move(m), std::move(r));
}

BallReal ldexp(const BallReal& x, long e) {
  Mpfr m(x.prec());
  mpfr_mul_2si(m.get(), x.mid().get(), e, MPFR_RNDN);
  Mpfr r = radius();
  mpfr_mul_2si(r.get(), x.rad().get(), e, MPFR_RNDU);
  return BallReal(std::move(m), std::move(r));
}

Ordering3 certified_compare(const BallReal& x, const BallReal& y) {
  if (mpfr_less_p(x.upper().get(), y.lower().get())) return Ordering3::Less;
  if (mpfr_greater_p(x.lower().get(), y.upper().get())) return Ordering3::Greater;
  return Ordering3::Undecided;
}

mpq_class parse_rational(const std::string& text) {
  std::string s = text;
  s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' '; }), s.end());
  if (s.empty()) throw InvalidArgument("empty rational");
  auto bad = [&] { return InvalidArgument("not a rational number: '" + text + "'"); };
  if (auto slash = s.find('/'); slash != std::string::npos) {
    mpq_class num = parse_rational(s.substr(0, slash));
    mpq_class den = parse_rational(s.substr(slash + 1));
    if (den == 0) throw InvalidArgument("zero denominator in '" + text + "'");
    mpq_class q = num / den;
    q.canonicalize();
    return q;
  }
  std::size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
  std::string digits;
  long scale = 0;
  bool seen_dot = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else if (c >= '0' && c <= '9') {
      digits.push_back(c);
      if (seen_dot) ++scale;
    } else {
      throw bad();
    }
  }
  if (digits.empty()) throw bad();
  mpz_class num(digits, 10);
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(scale));
  mpq_class q(neg ? mpz_class(-num) : num, den);
  q.canonicalize();
  return q;
}

}  // namespace rotcode
