#include "rotcode/cfrac.hpp"

#include "rotcode/error.hpp"

namespace rotcode {

namespace {

constexpr long kTailBits = 96;

std::optional<ContinuedFraction> try_expand(const ThetaOracle& theta, int depth, long bits) {
  BallReal x = theta.refine(bits);
  std::vector<mpz_class> a;
  std::vector<BallReal> tails;
  for (int m = 0; m <= depth; ++m) {
    auto fl = x.floor();
    if (!fl) return std::nullopt;
    if (m > 0 && *fl <= 0) return std::nullopt;
    a.push_back(*fl);
    BallReal f = x - BallReal::from_mpz(*fl, x.prec());
    if (f.contains_zero()) {
      if (m < depth) return std::nullopt;
      break;
    }
    x = BallReal::from_int(1, x.prec()) / f;
    if (m < depth) tails.push_back(x);
  }
  if (!tails.empty() && !tails.back().radius_le_pow2(-kTailBits)) return std::nullopt;
  ContinuedFraction cf = ContinuedFraction::from_quotients(std::move(a));
  cf.tails = std::move(tails);
  cf.working_bits = bits;
  return cf;
}

ContinuedFraction expand_from_rule(const ThetaOracle& theta, const QuotientFn& rule, int depth) {
  std::vector<mpz_class> a;
  for (int m = 0; m <= depth; ++m) a.push_back(rule(static_cast<std::size_t>(m)));
  ContinuedFraction cf = ContinuedFraction::from_quotients(std::move(a));
  const long bits = 2 * static_cast<long>(mpz_sizeinbase(cf.q.back().get_mpz_t(), 2)) + 2 * kTailBits;
  for (int m = 0; m < depth; ++m) {
    const std::size_t shift = static_cast<std::size_t>(m) + 1;
    ThetaOracle tail = ThetaOracle::from_quotients([rule, shift](std::size_t k) { return rule(k + shift); },
                                                   theta.spec() + "#tail");
    cf.tails.push_back(tail.refine(bits));
  }
  cf.working_bits = bits;
  return cf;
}

}  // namespace

ContinuedFraction ContinuedFraction::from_quotients(std::vector<mpz_class> a) {
  ContinuedFraction cf;
  cf.quotients = std::move(a);
  mpz_class p2 = 0, q2 = 1, p1 = 1, q1 = 0;
  for (const auto& am : cf.quotients) {
    mpz_class p = am * p1 + p2, q = am * q1 + q2;
    cf.p.push_back(p);
    cf.q.push_back(q);
    p2 = p1, q2 = q1, p1 = p, q1 = q;
  }
  return cf;
}

ContinuedFraction expand(const ThetaOracle& theta, int depth) {
  if (depth < 1) throw InvalidArgument("continued fraction depth must be at least 1");
  if (const QuotientFn* rule = theta.quotients()) return expand_from_rule(theta, *rule, depth);
  return escalate(
      128 + 8L * depth, [&](long bits) { return try_expand(theta, depth, bits); },
      "partial quotient of " + theta.spec());
}

std::vector<std::pair<mpz_class, mpz_class>> convergents(const ContinuedFraction& cf) {
  std::vector<std::pair<mpz_class, mpz_class>> out;
  for (std::size_t m = 0; m < cf.p.size(); ++m) out.emplace_back(cf.p[m], cf.q[m]);
  return out;
}

BallReal signed_error_from_tail(const ContinuedFraction& cf, int m) {
  if (m < 0 || m >= static_cast<int>(cf.tails.size())) throw InvalidArgument("tail index out of range");
  const BallReal& tail = cf.tails[static_cast<std::size_t>(m)];
  const mpfr_prec_t prec = tail.prec();
  BallReal den = tail * cf.q_at(m) + BallReal::from_mpz(cf.q_at(m - 1), prec);
  BallReal v = BallReal::from_int(m % 2 == 0 ? 1 : -1, prec) / den;
  return v;
}

BallReal signed_error(const ContinuedFraction& cf, int m, const ThetaOracle& theta) {
  if (m < 0 || m > cf.depth() - 1) throw InvalidArgument("signed_error needs 0 <= m <= depth - 1");
  const mpz_class& q = cf.q[static_cast<std::size_t>(m)];
  const mpz_class& p = cf.p[static_cast<std::size_t>(m)];
  const long start = 64 + 2 * static_cast<long>(mpz_sizeinbase(cf.q[static_cast<std::size_t>(m) + 1].get_mpz_t(), 2));
  BallReal direct = escalate(
      start,
      [&](long bits) -> std::optional<BallReal> {
        BallReal v = theta.refine(bits) * q - BallReal::from_mpz(p, static_cast<mpfr_prec_t>(bits));
        if (v.contains_zero()) return std::nullopt;
        // Relative accuracy of 2^-40 or better.
        Mpfr rel(kRadiusPrec);
        mpfr_div(rel.get(), v.rad().get(), v.abs_lower().get(), MPFR_RNDU);
        Mpfr lim(kRadiusPrec);
        mpfr_set_ui_2exp(lim.get(), 1, -40, MPFR_RNDN);
        if (mpfr_greater_p(rel.get(), lim.get())) return std::nullopt;
        return v;
      },
      "signed error q_m theta - p_m");
  BallReal identity = signed_error_from_tail(cf, m);
  if (!direct.overlaps(identity))
    throw Error("complete-quotient identity failed at m = " + std::to_string(m) + ": " + direct.to_string() +
                " vs " + identity.to_string());
  return direct;
}

BallReal nearest_distance(const mpz_class& M, const ThetaOracle& theta) {
  if (M < 1) throw InvalidArgument("nearest_distance needs M >= 1");
  const long start = 64 + 2 * static_cast<long>(mpz_sizeinbase(M.get_mpz_t(), 2));
  return escalate(
      start,
      [&](long bits) -> std::optional<BallReal> {
        auto f = (theta.refine(bits) * M).frac();
        if (!f || f->contains_zero()) return std::nullopt;
        BallReal g = BallReal::from_int(1, f->prec()) - *f;
        if (g.contains_zero()) return std::nullopt;
        switch (certified_compare(*f, g)) {
          case Ordering3::Less: return *f;
          case Ordering3::Greater: return g;
          case Ordering3::Undecided: break;
        }
        // Near 1/2: enclose min(f, 1 - f) endpoint-wise.
        Mpfr lo = f->lower(), hi = f->upper();
        mpfr_min(lo.get(), lo.get(), g.lower().get(), MPFR_RNDD);
        mpfr_min(hi.get(), hi.get(), g.upper().get(), MPFR_RNDU);
        return BallReal::from_bounds(lo, hi, f->prec());
      },
      "distance to the nearest integer");
}

ContinuedFraction expand_until_denominator(const ThetaOracle& theta, const mpz_class& bound) {
  for (int depth = 8;; depth *= 2) {
    ContinuedFraction cf = expand(theta, depth);
    if (cf.q.back() > bound) return cf;
    if (depth > 4096) throw PrecisionExhausted("denominators stay below the requested bound");
  }
}

BestApproximationScan best_approximation_scan(const ThetaOracle& theta, std::uint64_t limit) {
  BestApproximationScan out;
  out.limit = limit;
  ContinuedFraction cf = expand_until_denominator(theta, mpz_class(static_cast<unsigned long>(limit)));
  const long bits = 128 + 2 * static_cast<long>(mpz_sizeinbase(mpz_class(static_cast<unsigned long>(limit) + 1).get_mpz_t(), 2));
  const BallReal t = theta.refine(bits);
  std::vector<BallReal> d(limit + 1, BallReal(bits));
  auto dist = [&](std::uint64_t M) {
    BallReal f = *(t * static_cast<long>(M)).frac();
    BallReal g = BallReal::from_int(1, f.prec()) - f;
    return certified_compare(f, g) == Ordering3::Less ? f : g;
  };
  for (std::uint64_t M = 1; M <= limit; ++M) d[M] = dist(M);
  for (int N = 1; N + 1 <= cf.depth(); ++N) {
    if (cf.q[static_cast<std::size_t>(N + 1)] > static_cast<unsigned long>(limit)) break;
    const std::uint64_t qn = cf.q[static_cast<std::size_t>(N)].get_ui();
    const std::uint64_t qn1 = cf.q[static_cast<std::size_t>(N + 1)].get_ui();
    if (qn == qn1) continue;
    ++out.levels;
    for (std::uint64_t M = 1; M < qn1; ++M) {
      if (M == qn) continue;
      ++out.comparisons;
      Ordering3 c = certified_compare(d[M], d[qn]);
      if (c == Ordering3::Undecided)
        c = certified_compare(nearest_distance(mpz_class(static_cast<unsigned long>(M)), theta),
                              nearest_distance(mpz_class(static_cast<unsigned long>(qn)), theta));
      if (c != Ordering3::Greater) ++out.violations;
    }
  }
  return out;
}

}  // namespace rotcode
