#include "rotcode/approximant.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace rotcode {

namespace {

std::uint64_t to_u64(const mpz_class& z, const char* what) {
  if (z < 0 || mpz_sizeinbase(z.get_mpz_t(), 2) > 62) throw InvalidArgument(std::string(what) + " out of range");
  return static_cast<std::uint64_t>(z.get_ui());
}

BallReal circular_distance(const BallReal& x, const BallReal& r) {
  BallReal d = abs(x - r);
  BallReal e = BallReal::from_int(1, d.prec()) - d;
  Mpfr lo = d.lower(), hi = d.upper();
  mpfr_min(lo.get(), lo.get(), e.lower().get(), MPFR_RNDD);
  mpfr_min(hi.get(), hi.get(), e.upper().get(), MPFR_RNDU);
  return BallReal::from_bounds(lo, hi, d.prec());
}

BallComplex scale(const BallComplex& z, const ComplexRational& c) { return z * BallComplex::from(c, z.prec()); }

BallReal ball_max_abs(const std::vector<ComplexRational>& values, mpfr_prec_t prec) {
  std::optional<BallReal> h;
  for (const auto& v : values) {
    BallReal a = sqrt(BallReal::from_mpq(v.norm2(), prec));
    if (!h || mpfr_greater_p(a.mid().get(), h->mid().get())) h = a;
  }
  return *h;
}

// Ball of sum + radius `extra` in both components.
BallComplex widen(const BallComplex& z, const Mpfr& extra) { return z.inflate(extra); }

}  // namespace

std::vector<ComplexRational> digit_values(const PartitionSpec& partition) {
  if (partition.weights_T()) return *partition.weights_T();
  std::vector<ComplexRational> v;
  for (int i = 0; i <= partition.size(); ++i) v.emplace_back(i);
  return v;
}

BallComplex Approximant::numerator(const Base& b, mpfr_prec_t prec) const {
  std::vector<int> head(letters.begin(), letters.begin() + static_cast<long>(2 * q));
  std::vector<int> pre(letters.begin(), letters.begin() + static_cast<long>(q));
  BallComplex a = digit_sum(b, head, values, prec) * b.pow(static_cast<long>(2 * q), prec);
  BallComplex c = digit_sum(b, pre, values, prec) * b.pow(static_cast<long>(q), prec);
  return a - c;
}

Approximant build(const CodingWord& word, const ContinuedFraction& cf, int n, int w, int jobs) {
  if (w < 2) throw InvalidArgument("window w must be at least 2");
  if (n < 0 || n + 1 > cf.depth()) throw InvalidArgument("level " + std::to_string(n) + " needs q_{n+1} from the expansion");
  Approximant a;
  a.level = n;
  a.window = w;
  a.q = to_u64(cf.q_at(n), "q_n");
  a.q_next = to_u64(cf.q_at(n + 1), "q_{n+1}");
  a.values = digit_values(word.partition());
  a.letters = word.letters(0, a.window_end(), jobs);
  return a;
}

std::optional<std::uint64_t> MismatchRecord::min_gap() const {
  if (progressions.size() < 2) return std::nullopt;
  std::uint64_t g = UINT64_MAX;
  for (std::size_t k = 1; k < progressions.size(); ++k)
    g = std::min(g, progressions[k].start - progressions[k - 1].start);
  return g;
}

MismatchRecord mismatches(const CodingWord& word, const Approximant& approx) {
  MismatchRecord rec;
  rec.level = approx.level;
  rec.window = approx.window;
  rec.q = approx.q;
  const std::uint64_t q = approx.q, m = approx.window_end();
  const auto& val = approx.values;
  std::map<std::uint64_t, std::vector<std::uint64_t>> classes;
  for (std::uint64_t j = 0; j < m; ++j) {
    if (val[static_cast<std::size_t>(approx.letters[j])] == val[static_cast<std::size_t>(approx.letter(j))]) continue;
    rec.positions.push_back(j);
    classes[j % q].push_back(j);
  }
  for (const auto& [res, pos] : classes) {
    const std::uint64_t i = pos.front();
    std::uint64_t expect = i;
    for (std::uint64_t p : pos) {
      if (p != expect)
        throw StructureViolation("level " + std::to_string(approx.level) + ", w = " + std::to_string(approx.window) +
                                 ": residue " + std::to_string(res) + " mismatches at " + std::to_string(p) +
                                 " but not at " + std::to_string(expect));
      expect += q;
    }
    if (expect < m)
      throw StructureViolation("level " + std::to_string(approx.level) + ", w = " + std::to_string(approx.window) +
                               ": residue " + std::to_string(res) + " stops mismatching at " + std::to_string(expect));
    Progression pr;
    pr.start = i;
    pr.change = val[static_cast<std::size_t>(approx.letters[i])] - val[static_cast<std::size_t>(approx.letters[i - q])];
    for (std::uint64_t p : pos) pr.constant = pr.constant && approx.letters[p] == approx.letters[i];
    rec.progressions.push_back(pr);
  }
  std::sort(rec.progressions.begin(), rec.progressions.end(),
            [](const Progression& a, const Progression& b) { return a.start < b.start; });
  for (int j = 1; j < approx.window; ++j) {
    const std::uint64_t lo = (static_cast<std::uint64_t>(j) + 1) * q, hi = lo + q;
    rec.window_counts.push_back(static_cast<int>(std::count_if(
        rec.progressions.begin(), rec.progressions.end(),
        [&](const Progression& p) { return p.start >= lo && p.start < hi; })));
  }
  const PartitionSpec& part = word.partition();
  rec.step_distance = nearest_distance(mpz_class(static_cast<unsigned long>(q)), part.theta());
  for (const auto& pr : rec.progressions) {
    const long bits = 128;
    BallReal x = word.orbit_point(pr.start, bits);
    std::optional<BallReal> best;
    for (int k = 0; k <= part.size(); ++k) {
      BallReal d = circular_distance(x, part.r(k, bits));
      if (!best || mpfr_less_p(d.mid().get(), best->mid().get())) best = d;
    }
    rec.boundary_distance.push_back(*best);
  }
  return rec;
}

std::uint64_t stability_length(const CodingWord& word, const MismatchRecord& rec, std::uint64_t cap) {
  std::uint64_t L = UINT64_MAX;
  for (const auto& pr : rec.progressions) {
    const int a = word.letter(pr.start);
    std::uint64_t m = 0;
    while (m < cap && word.letter(pr.start + (m + 1) * rec.q) == a) ++m;
    L = std::min(L, m);
  }
  return rec.progressions.empty() ? 0 : L;
}

ConditionsReport verify_conditions(const CodingWord& word, const ContinuedFraction& cf, int n_from, int n_to, int w,
                                   int egp_span, int jobs) {
  ConditionsReport rep;
  const int A = word.partition().size();
  const BallReal eta = word.partition().eta(128);
  for (int n = n_from; n <= n_to; ++n) {
    ConditionRow row;
    row.n = n;
    row.w = w;
    row.bound = 2 * A;
    Approximant ap = build(word, cf, n, w, jobs);
    row.q = ap.q;
    row.q_next = ap.q_next;
    Mpfr f(128);
    mpfr_mul_ui(f.get(), eta.mid().get(), static_cast<unsigned long>(ap.q_next), MPFR_RNDN);
    mpfr_div_ui(f.get(), f.get(), 4, MPFR_RNDN);
    row.f0 = std::max<std::uint64_t>(1, mpfr_get_ui(f.get(), MPFR_RNDD));
    Mpfr g(128);
    mpfr_mul_ui(g.get(), eta.mid().get(), static_cast<unsigned long>(ap.q), MPFR_RNDN);
    row.asymptotic = mpfr_cmp_ui(g.get(), 2 * (static_cast<unsigned long>(w) + 1)) > 0;
    try {
      MismatchRecord rec = mismatches(word, ap);
      row.t = rec.t();
      for (int c : rec.window_counts) row.max_window_count = std::max(row.max_window_count, c);
      row.bpp = row.max_window_count <= row.bound ? Status::Pass : Status::Fail;
      row.t_bound = row.t <= row.bound ? Status::Pass : Status::Fail;
      row.t_bound_with_zero = row.t <= row.bound + 2 ? Status::Pass : Status::Fail;
      row.min_gap = rec.min_gap();
      if (rec.t() > 0) {
        row.stability = stability_length(word, rec, 2 * ap.q_next + 2);
        row.lpp = row.stability >= row.f0 ? Status::Pass : Status::Fail;
        row.near_boundary = Status::Pass;
        for (const auto& d : rec.boundary_distance) {
          Ordering3 c = certified_compare(d, rec.step_distance);
          if (c == Ordering3::Greater) row.near_boundary = Status::Fail;
          else if (c == Ordering3::Undecided && row.near_boundary == Status::Pass) row.near_boundary = Status::Inconclusive;
        }
      }
    } catch (const StructureViolation& e) {
      row.bpp = row.asymptotic ? Status::Fail : Status::NotApplicable;
      row.note = e.what();
    }
    rep.rows.push_back(row);
  }
  for (auto it = rep.rows.rbegin(); it != rep.rows.rend() && static_cast<int>(rep.egp_tail.size()) < egp_span; ++it)
    if (it->min_gap) rep.egp_tail.push_back(*it->min_gap);
  std::reverse(rep.egp_tail.begin(), rep.egp_tail.end());
  if (rep.egp_tail.size() >= 2)
    rep.egp = std::is_sorted(rep.egp_tail.begin(), rep.egp_tail.end()) ? Status::Pass : Status::Fail;
  return rep;
}

ApproximantError approximant_error(const CodingWord& word, const Approximant& approx, const MismatchRecord& rec,
                                   const Base& b) {
  const std::uint64_t q = approx.q, m = approx.window_end();
  const double lb = b.log2_modulus();
  const double gap = 1 - 1 / std::sqrt(b.norm2().get_d());
  const auto extra = static_cast<std::uint64_t>(std::ceil((10 + std::log2(1 / gap)) / lb)) + 2;
  const std::uint64_t N = m + extra;
  const std::vector<int> letters = word.letters(0, N);
  std::vector<int> periodic(3 * m);
  for (std::uint64_t j = 0; j < periodic.size(); ++j) periodic[j] = approx.letter(j);
  const Mpfr Hup = max_abs(approx.values);

  ApproximantError out;
  long bits = static_cast<long>(std::ceil(static_cast<double>(m + 2 * q) * (lb + 0.01))) + 96 +
              2 * static_cast<long>(std::ceil(std::log2(1 / gap)));
  for (int attempt = 0; attempt < 3; ++attempt, bits *= 2) {
    const auto p = static_cast<mpfr_prec_t>(bits);
    out.bits = bits;
    const BallComplex alpha = widen(digit_sum(b, letters, approx.values, p), tail_bound(b, Hup, N));
    const BallComplex bq = b.pow(static_cast<long>(q), p);
    const BallComplex one = BallComplex::from(ComplexRational(1), p);
    const BallComplex denom = bq * (bq - one);
    const BallComplex pn = approx.numerator(b, p);
    const BallComplex alpha_n = pn / denom;
    const BallComplex direct = widen(digit_sum(b, periodic, approx.values, p), tail_bound(b, Hup, periodic.size()));
    out.periodic_agrees = alpha_n.overlaps(direct);

    BallComplex corr(p), shifted(p), small_corr(p);
    const BallComplex inv_sm1 = inverse(bq - one);
    for (const auto& pr : rec.progressions) {
      const long i = static_cast<long>(pr.start);
      corr += scale(b.pow(static_cast<long>(q) - i, p), pr.change) * inv_sm1;
      shifted += scale(b.pow(-i, p), pr.change) * inv_sm1;
      small_corr += scale(b.pow(2 * static_cast<long>(q) - i, p), pr.change);
    }
    const BallReal H = ball_max_abs(approx.values, p);
    out.residual = (alpha - alpha_n - corr).abs();
    out.residual_shifted = (alpha - alpha_n - shifted).abs();
    out.bound = H * b.modulus_pow_neg(static_cast<long>(m), p) * 2L;
    out.small_form = (alpha * (bq * bq - bq) - pn - small_corr).abs();
    out.small_bound = H * b.modulus_pow_neg(static_cast<long>((approx.window - 1) * q), p) * 2L;

    Mpfr r100(64);
    mpfr_mul_ui(r100.get(), alpha.radius_upper().get(), 100, MPFR_RNDU);
    out.resolved = mpfr_lessequal_p(r100.get(), out.bound.lower().get());
    const Ordering3 c1 = certified_compare(out.residual, out.bound);
    const Ordering3 c2 = certified_compare(out.small_form, out.small_bound);
    if (c1 == Ordering3::Greater || c2 == Ordering3::Greater)
      throw BoundViolated("approximant error exceeds its bound at level " + std::to_string(approx.level) +
                              ", w = " + std::to_string(approx.window) + ", b = " + b.to_string(),
                          approx.level, approx.window);
    if (c1 == Ordering3::Less && c2 == Ordering3::Less) {
      out.status = Status::Pass;
      return out;
    }
  }
  out.status = Status::Inconclusive;
  return out;
}

}  // namespace rotcode
