#include "rotcode/series.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "rotcode/error.hpp"

namespace rotcode {

namespace {

long bit_length(std::uint64_t n) {
  long b = 0;
  while (n) {
    ++b;
    n >>= 1;
  }
  return b;
}

// Lower bound of 10^-digits.
Mpfr ten_pow_neg(long digits) {
  Mpfr r(64);
  mpfr_set_ui(r.get(), 10, MPFR_RNDD);
  Mpfr e(64);
  mpfr_set_si(e.get(), -digits, MPFR_RNDN);
  mpfr_pow(r.get(), r.get(), e.get(), MPFR_RNDD);
  return r;
}

double log2_of(const Mpfr& x) {
  Mpfr l(64);
  mpfr_log2(l.get(), x.get(), MPFR_RNDU);
  return mpfr_get_d(l.get(), MPFR_RNDU);
}

mpq_class to_q(const Mpfr& x) {
  mpq_class q;
  mpfr_get_q(q.get_mpq_t(), x.get());
  return q;
}

// Terms N with tail(H, N) <= 10^-digits / 2.
std::uint64_t choose_terms(const Base& b, const Mpfr& H, long digits) {
  std::uint64_t N = terms_for_digits(b, digits);
  Mpfr target = ten_pow_neg(digits);
  mpfr_div_2ui(target.get(), target.get(), 1, MPFR_RNDD);
  if (mpfr_zero_p(H.get())) return N;
  for (;;) {
    Mpfr tail = tail_bound(b, H, N);
    if (mpfr_cmp(tail.get(), target.get()) <= 0) return N;
    double extra = (log2_of(tail) - log2_of(target)) / b.log2_modulus();
    N += static_cast<std::uint64_t>(std::max(1.0, std::ceil(extra) + 1));
  }
}

// Precision at which Horner's rounding stays far below 10^-digits.
long working_bits(const Base& b, const Mpfr& H, long digits) {
  Mpfr beta(64);
  mpfr_set_q(beta.get(), mpq_class(mpq_class(1) / b.norm2()).get_mpq_t(), MPFR_RNDU);
  mpfr_sqrt(beta.get(), beta.get(), MPFR_RNDU);
  Mpfr gap(64);
  mpfr_ui_sub(gap.get(), 1, beta.get(), MPFR_RNDD);
  Mpfr e(64);
  mpfr_mul_ui(e.get(), H.get(), 12, MPFR_RNDU);
  mpfr_div(e.get(), e.get(), gap.get(), MPFR_RNDU);
  mpfr_div(e.get(), e.get(), gap.get(), MPFR_RNDU);
  long extra = mpfr_zero_p(e.get()) ? 0 : std::max(0L, static_cast<long>(std::ceil(log2_of(e))));
  const long bits = static_cast<long>(std::ceil(static_cast<double>(digits) * 3.3219280948873623)) + 64 + extra;
  if (bits > precision_cap())
    throw PrecisionExhausted(std::to_string(digits) + " digits need " + std::to_string(bits) + " bits, above the cap of " +
                             std::to_string(precision_cap()));
  return bits;
}

template <class Sum>
SeriesValue finish(const Base& b, const Mpfr& H, std::uint64_t N, long digits, Sum sum) {
  const Mpfr target = ten_pow_neg(digits);
  long bits = working_bits(b, H, digits);
  for (int attempt = 0;; ++attempt, bits *= 2) {
    SeriesValue out;
    out.terms_used = N;
    out.bits = bits;
    out.tail_bound = tail_bound(b, H, N);
    out.value = sum(bits).inflate(out.tail_bound);
    if (mpfr_cmp(out.value.radius_upper().get(), target.get()) <= 0 || attempt == 3 || 2 * bits > precision_cap())
      return out;
  }
}

BallReal floor_input(const ThetaOracle& theta, std::uint64_t n, const BallReal& r, long bits) {
  return theta.refine(bits) * mpz_class(static_cast<unsigned long>(n)) + r;
}

}  // namespace

std::string SeriesValue::describe(int digits) const {
  std::string out = value.re().mid_decimal(digits);
  if (!value.im().contains_zero() || mpfr_sgn(value.im().mid().get()) != 0)
    out += (mpfr_sgn(value.im().mid().get()) < 0 ? " - " : " + ") + abs(value.im()).mid_decimal(digits) + "i";
  const long e = std::max(value.re().error_exponent10(), value.im().error_exponent10());
  return out + " +/- 1e" + std::to_string(e);
}

std::uint64_t terms_for_digits(const Base& b, long digits) {
  const double ln_b = b.log2_modulus() * std::log(2.0);
  if (ln_b <= 0) throw InvalidArgument("base " + b.to_string() + " is too close to the unit circle");
  return static_cast<std::uint64_t>(std::ceil(static_cast<double>(digits + 20) * std::log(10.0) / ln_b));
}

SeriesValue eval_T(const Base& b, const CodingWord& word, const std::vector<ComplexRational>& u, long digits,
                   int jobs) {
  if (static_cast<int>(u.size()) != word.alphabet_size())
    throw InvalidArgument("expected " + std::to_string(word.alphabet_size()) + " digit values");
  const Mpfr H = max_abs(u);
  const std::uint64_t N = choose_terms(b, H, digits);
  const std::vector<int> letters = word.letters(0, N, jobs);
  return finish(b, H, N, digits, [&](long bits) { return digit_sum(b, letters, u, bits); });
}

SeriesValue eval_T(const Base& b, const CodingWord& word, long digits, int jobs) {
  const auto& u = word.partition().weights_T();
  if (!u) throw InvalidArgument("partition has no weights u");
  return eval_T(b, word, *u, digits, jobs);
}

SeriesValue indicator_sum(const Base& b, const ThetaOracle& theta, const Boundary& r, long digits) {
  CodingWord single(PartitionSpec(theta, {r}));
  return eval_T(b, single, {ComplexRational(1), ComplexRational(0)}, digits);
}

SeriesValue eval_T_telescoped(const Base& b, const PartitionSpec& partition, const std::vector<ComplexRational>& u,
                              long digits) {
  const int l = partition.size();
  if (static_cast<int>(u.size()) != l + 1) throw InvalidArgument("expected " + std::to_string(l + 1) + " digit values");
  Mpfr H = max_abs(u);
  mpfr_mul_ui(H.get(), H.get(), static_cast<unsigned long>(2 * (l + 1)), MPFR_RNDU);
  const long inner = digits + 1 + static_cast<long>(std::ceil(std::log10(std::max(1.0, H.to_double()))));
  const long bits = working_bits(b, H, inner);

  SeriesValue out;
  out.bits = bits;
  out.tail_bound = Mpfr(64);
  mpfr_set_zero(out.tail_bound.get(), 1);
  // u_l * sum_n b^-n = u_l * b / (b - 1).
  const ComplexRational& bv = b.value();
  BallComplex bb = BallComplex::from(bv, bits);
  out.value = BallComplex::from(u[static_cast<std::size_t>(l)], bits) * bb / (bb - BallComplex::from(1, bits));
  for (int i = 0; i < l; ++i) {
    ComplexRational d = u[static_cast<std::size_t>(i)] - u[static_cast<std::size_t>(i + 1)];
    SeriesValue D = indicator_sum(b, partition.theta(), partition.boundaries()[static_cast<std::size_t>(i)], inner);
    out.value += BallComplex::from(d, bits) * D.value;
    out.terms_used = std::max(out.terms_used, D.terms_used);
    mpfr_add(out.tail_bound.get(), out.tail_bound.get(), D.tail_bound.get(), MPFR_RNDU);
  }
  return out;
}

SeriesValue eval_S(const Base& b, const PartitionSpec& partition, long digits) {
  const auto& vopt = partition.weights_S();
  if (!vopt) throw InvalidArgument("partition has no weights v");
  const auto& v = *vopt;
  if (static_cast<int>(v.size()) != partition.size())
    throw InvalidArgument("expected " + std::to_string(partition.size()) + " weights v");
  for (const auto& x : v)
    if (x.is_zero()) throw InvalidArgument("weights v must be nonzero");
  const ThetaOracle& theta = partition.theta();
  const bool positive = escalate(
      64,
      [&](long bits) -> std::optional<bool> {
        BallReal x = theta.refine(bits);
        if (mpfr_sgn(x.lower().get()) > 0) return true;
        if (mpfr_sgn(x.upper().get()) <= 0) return false;
        return std::nullopt;
      },
      "sign of theta");
  if (!positive) throw InvalidArgument("S needs theta > 0");

  const mpz_class& s = partition.shift();
  const auto& bs = partition.boundaries();
  for (std::size_t i = 0; i < bs.size(); ++i) {
    const Boundary& r = bs[i];
    // n theta + r = (n + c1) theta + c0 - c1 s.
    if (r.tagged && r.c1.get_den() == 1 && r.c1 <= 0) {
      mpq_class rest = r.c0 - r.c1 * s;
      if (rest.get_den() == 1)
        throw BoundaryHit("n theta + " + r.describe() + " is an integer at n = " + mpz_class(-r.c1).get_str());
    }
  }

  // |c_m| <= V (floor(1/theta) + 1).
  const mpz_class inv_floor = escalate(
      64, [&](long bits) { return (BallReal::from_int(1, bits) / theta.refine(bits)).floor(); }, "floor of 1/theta");
  Mpfr H = max_abs(v);
  {
    Mpfr V(64);
    mpfr_set_zero(V.get(), 1);
    for (const auto& x : v) mpfr_add(V.get(), V.get(), max_abs({x}).get(), MPFR_RNDU);
    mpfr_mul_z(H.get(), V.get(), mpz_class(inv_floor + 1).get_mpz_t(), MPFR_RNDU);
  }
  const std::uint64_t M = choose_terms(b, H, digits);

  std::vector<ComplexRational> coeffs(M);
  for (std::uint64_t n = 0;; ++n) {
    bool any = false;
    for (std::size_t i = 0; i < bs.size(); ++i) {
      const mpz_class f = escalate(
          64 + bit_length(n),
          [&](long bits) {
            const long p = bits + bit_length(n);
            return floor_input(theta, n, bs[i].ball(partition.t(p)), p).floor();
          },
          "floor(n theta + r)");
      if (f < 0) throw InvalidArgument("n theta + r is negative");
      if (f < mpz_class(static_cast<unsigned long>(M))) {
        any = true;
        coeffs[f.get_ui()] = coeffs[f.get_ui()] + v[i];
      }
    }
    if (!any) break;
  }
  return finish(b, H, M, digits, [&](long bits) { return coefficient_sum(b, coeffs, bits); });
}

SReduction reduce_S_to_T(const PartitionSpec& partition, long v_bound) {
  const auto& vopt = partition.weights_S();
  if (!vopt) throw InvalidArgument("partition has no weights v");
  if (partition.shift() < 1) throw InvalidArgument("the reduction needs theta > 1");
  const auto& v = *vopt;
  const ThetaOracle inv = ThetaOracle::reciprocal(partition.theta());
  const mpz_class& s = partition.shift();

  std::vector<Boundary> heads, tails;
  std::map<std::string, ComplexRational> jump;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < partition.boundaries().size(); ++i) {
    if (v[i].is_zero()) throw InvalidArgument("weights v must be nonzero");
    const Boundary& r = partition.boundaries()[i];
    const std::string k = std::to_string(i + 1);
    const std::string head_text = "r" + k + "/theta";
    const std::string tail_text = "1-(1-r" + k + ")/theta";
    if (r.tagged) {
      const mpq_class c1 = r.c0 - r.c1 * s;
      heads.push_back(Boundary::exact(r.c1, c1, head_text));
      tails.push_back(Boundary::exact(1 + r.c1, c1 - 1, tail_text));
    } else {
      const long p = 256;
      BallReal rb = BallReal::from_mpq(r.mid, r.rad, p);
      BallReal tb = inv.refine(p);
      BallReal h = rb * tb;
      BallReal t = BallReal::from_int(1, p) - (BallReal::from_int(1, p) - rb) * tb;
      heads.push_back(Boundary::opaque(to_q(h.mid()), to_q(h.rad()), head_text));
      tails.push_back(Boundary::opaque(to_q(t.mid()), to_q(t.rad()), tail_text));
    }
    jump[head_text] = v[i];
    jump[tail_text] = -v[i];
    index[tail_text] = i;
  }

  // A lattice relation between r_i/theta and r_j/theta is one between r_i
  // and r_j; the pair r_i/theta, 1-(1-r_i)/theta always differs by
  // 1/theta - 1 and is not checked.
  if (heads.size() > 1) {
    ConditionCReport rep = check_condition_C(PartitionSpec(inv, heads), v_bound);
    if (rep.violation)
      throw ConditionCViolation("A' has r_" + std::to_string(rep.violation->j) + " - r_" +
                                std::to_string(rep.violation->i) + " = " + std::to_string(rep.violation->v) +
                                " theta' + " + rep.violation->u.get_str());
  }

  std::vector<Boundary> all = heads;
  all.insert(all.end(), tails.begin(), tails.end());
  PartitionSpec corrected(inv, all);
  const int K = corrected.size();
  ComplexRational total;
  for (const auto& x : v) total = total + x;
  std::vector<ComplexRational> u(static_cast<std::size_t>(K + 1));
  u[static_cast<std::size_t>(K)] = total;
  for (int k = K; k >= 1; --k)
    u[static_cast<std::size_t>(k - 1)] =
        u[static_cast<std::size_t>(k)] + jump.at(corrected.boundaries()[static_cast<std::size_t>(k - 1)].text);
  corrected.with_weights_T(u);

  PartitionSpec literal(inv, tails);
  const int L = literal.size();
  std::vector<ComplexRational> lu(static_cast<std::size_t>(L + 1));
  for (int k = L; k >= 1; --k)
    lu[static_cast<std::size_t>(k - 1)] =
        lu[static_cast<std::size_t>(k)] + v[index.at(literal.boundaries()[static_cast<std::size_t>(k - 1)].text)];
  literal.with_weights_T(lu);

  return SReduction{inv, std::move(corrected), std::move(u), std::move(literal), std::move(lu)};
}

CountingCheck counting_oracle(const ThetaOracle& theta, const mpq_class& r, std::uint64_t m_max) {
  if (r <= 0 || r >= 1) throw InvalidArgument("r must lie in (0, 1)");
  CountingCheck out;
  out.m_max = m_max;
  const mpz_class inv_floor = escalate(
      64, [&](long bits) { return (BallReal::from_int(1, bits) / theta.refine(bits)).floor(); }, "floor of 1/theta");
  out.floor_inverse = inv_floor.get_si();

  std::vector<int> count(m_max + 1, 0);
  for (std::uint64_t n = 0;; ++n) {
    const mpz_class f = escalate(
        64 + bit_length(n),
        [&](long bits) {
          const long p = bits + bit_length(n);
          return floor_input(theta, n, BallReal::from_mpq(r, p), p).floor();
        },
        "floor(n theta + r)");
    if (f > mpz_class(static_cast<unsigned long>(m_max))) break;
    ++count[f.get_ui()];
  }

  for (std::uint64_t m = 0; m <= m_max; ++m) {
    out.max_count = std::max(out.max_count, count[m]);
    const bool delta = escalate(
        64 + bit_length(m),
        [&](long bits) -> std::optional<bool> {
          const long p = bits + bit_length(m);
          BallReal inv = BallReal::from_int(1, p) / theta.refine(p);
          auto x = ((BallReal::from_mpz(mpz_class(static_cast<unsigned long>(m)), p) - BallReal::from_mpq(r, p)) * inv)
                       .frac();
          auto fi = inv.frac();
          if (!x || !fi) return std::nullopt;
          Ordering3 c = certified_compare(*x, BallReal::from_int(1, p) - *fi);
          if (c == Ordering3::Undecided) return std::nullopt;
          return c == Ordering3::Greater;
        },
        "frac((m - r) / theta)");
    const long formula = out.floor_inverse + (delta ? 1 : 0);
    if (formula != count[m]) {
      ++out.mismatches;
      if (!out.first_mismatch) out.first_mismatch = m;
    }
  }
  return out;
}

ShiftIdentity shift_identity(const Base& b, const PartitionSpec& partition, const BoundaryReduction& red, long digits) {
  const ThetaOracle& theta = partition.theta();
  const auto& bs = partition.boundaries();
  const long inner = digits + 2;
  ShiftIdentity out;
  out.lhs = indicator_sum(b, theta, bs[static_cast<std::size_t>(red.removed - 1)], inner);
  SeriesValue Di = indicator_sum(b, theta, bs[static_cast<std::size_t>(red.kept - 1)], inner);
  SeriesValue Dc = indicator_sum(b, theta, red.extra, inner);
  const long bits = std::max(out.lhs.bits, std::max(Di.bits, Dc.bits));

  BallComplex prefix(bits);
  for (std::uint64_t n : red.prefix) prefix += b.pow(-static_cast<long>(n), bits);
  const BallComplex shift = b.pow(-red.v, bits);
  BallComplex inner_sum = Di.value - Dc.value;
  if (red.plus_one) {
    BallComplex bb = BallComplex::from(b.value(), bits);
    inner_sum += bb / (bb - BallComplex::from(1, bits));
  }
  out.rhs = prefix + shift * inner_sum;
  out.rhs_literal = prefix + shift * Di.value;
  out.discrepancy = (out.lhs.value - out.rhs).abs();
  out.literal_discrepancy = (out.lhs.value - out.rhs_literal).abs();
  return out;
}

void check_not_root_of_unity(const ComplexRational& z, unsigned max_order) {
  if (z.norm2() != 1) throw InvalidArgument(z.to_string() + " is not on the unit circle");
  ComplexRational p = z;
  for (unsigned k = 1; k <= max_order; ++k, p = p * z)
    if (p == ComplexRational(1)) throw RootOfUnity(z.to_string() + " has order " + std::to_string(k));
}

namespace {

TrigPair trig_pair(const mpq_class& modulus, const ComplexRational& z, long digits, bool cosine) {
  check_not_root_of_unity(z);
  if (modulus <= 1) throw InvalidArgument("modulus must exceed 1");
  const ThetaOracle theta = ThetaOracle::log_ratio(z, ComplexRational(-1), mpq_class(1, 2));
  PartitionSpec partition = PartitionSpec::parse(theta, cosine ? "1/4,3/4" : "1/2");
  std::vector<ComplexRational> u = cosine ? std::vector<ComplexRational>{1, 0, 1} : std::vector<ComplexRational>{1, 0};
  CodingWord word(partition);
  const Base b1(ComplexRational(modulus) * z.conj());
  const Base b2(ComplexRational(modulus) * z);
  const long inner = digits + 2;
  SeriesValue t1 = eval_T(b1, word, u, inner);
  SeriesValue t2 = eval_T(b2, word, u, inner);
  const long bits = std::max(t1.bits, t2.bits);

  TrigPair out;
  BallReal half = BallReal::from_mpq(mpq_class(1, 2), bits);
  if (cosine) {
    out.combination = (t1.value + t2.value) * half;
  } else {
    BallComplex d = (t1.value - t2.value) * half;
    out.combination = BallComplex(d.im(), -d.re());
  }

  // Direct sum from exact powers; the sign of cos(n x) or sin(n x) is exact.
  const Base br{ComplexRational(modulus)};
  Mpfr one(64);
  mpfr_set_ui(one.get(), 1, MPFR_RNDU);
  const std::uint64_t N = choose_terms(br, one, inner);
  out.terms_used = N;
  BallReal sum(bits);
  ComplexRational p(1);
  mpq_class scale(1);
  const mpq_class inv_mod = 1 / modulus;
  for (std::uint64_t n = 0; n < N; ++n) {
    const mpq_class& x = cosine ? p.re : p.im;
    if (x > 0) sum += BallReal::from_mpq(x * scale, bits);
    p = p * z;
    scale *= inv_mod;
  }
  out.direct = sum.inflate(tail_bound(br, one, N));
  out.discrepancy = (BallComplex::from_real(out.direct) - out.combination).abs();
  return out;
}

}  // namespace

TrigPair cosine_pair(const mpq_class& modulus, const ComplexRational& z, long digits) {
  return trig_pair(modulus, z, digits, true);
}

TrigPair sine_pair(const mpq_class& modulus, const ComplexRational& z, long digits) {
  return trig_pair(modulus, z, digits, false);
}

IndependenceWitness multiplicative_independence(const ComplexRational& b1, const ComplexRational& b2,
                                                int max_exponent) {
  IndependenceWitness out;
  out.max_exponent = max_exponent;
  std::vector<ComplexRational> p1, p2;
  std::vector<mpq_class> n1, n2;
  ComplexRational a(1), c(1);
  for (int k = 1; k <= max_exponent; ++k) {
    a = a * b1;
    c = c * b2;
    p1.push_back(a);
    p2.push_back(c);
    n1.push_back(a.norm2());
    n2.push_back(c.norm2());
  }
  for (int x = 0; x < max_exponent; ++x) {
    for (int y = 0; y < max_exponent; ++y) {
      ++out.pairs_checked;
      if (p1[static_cast<std::size_t>(x)] == p2[static_cast<std::size_t>(y)]) ++out.coincidences;
      if (n1[static_cast<std::size_t>(x)] == n2[static_cast<std::size_t>(y)]) {
        ++out.equal_modulus;
        if (x != y) ++out.equal_modulus_off_diagonal;
      }
    }
  }
  return out;
}

}  // namespace rotcode
