#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <thread>

#include "rotcode/approximant.hpp"
#include "rotcode/cfrac.hpp"
#include "rotcode/coding.hpp"
#include "rotcode/report.hpp"
#include "rotcode/series.hpp"
#include "rotcode/structure.hpp"

namespace rotcode {

namespace {

using Clock = std::chrono::steady_clock;

class Rows {
 public:
  Rows(std::string suite, bool timings) : suite_(std::move(suite)), timings_(timings), last_(Clock::now()) {}

  CheckRow& add(std::string case_id, Status status, std::string tolerance = "") {
    CheckRow r;
    r.suite = suite_;
    r.case_id = std::move(case_id);
    r.status = status;
    r.tolerance = std::move(tolerance);
    const auto now = Clock::now();
    if (timings_) r.seconds = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    rows_.push_back(std::move(r));
    return rows_.back();
  }
  std::vector<CheckRow> take() { return std::move(rows_); }

 private:
  std::string suite_;
  bool timings_;
  Clock::time_point last_;
  std::vector<CheckRow> rows_;
};

void put(CheckRow& r, std::string k, std::string v) { r.witness.emplace_back(std::move(k), std::move(v)); }

std::string num(std::uint64_t x) { return std::to_string(x); }

std::string sci(const Mpfr& x) {
  char* s = nullptr;
  mpfr_asprintf(&s, "%.3Re", x.get());
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

std::string upper(const BallReal& x) { return sci(x.upper()); }

std::string fixed(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string level(int n) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "n=%02d", n);
  return buf;
}

std::string join(const std::vector<std::uint64_t>& xs) {
  std::string out;
  for (auto x : xs) out += (out.empty() ? "" : " ") + std::to_string(x);
  return out;
}

bool below_pow10(const BallReal& x, long e) {
  Mpfr t(64);
  mpfr_set_ui(t.get(), 10, MPFR_RNDD);
  mpfr_pow_si(t.get(), t.get(), e, MPFR_RNDD);
  return mpfr_cmp(x.upper().get(), t.get()) <= 0;
}

bool radius_below(const BallComplex& x, long e) {
  Mpfr t(64);
  mpfr_set_ui(t.get(), 10, MPFR_RNDD);
  mpfr_pow_si(t.get(), t.get(), e, MPFR_RNDD);
  return mpfr_cmp(x.radius_upper().get(), t.get()) <= 0;
}

std::vector<ComplexRational> parse_values(const std::vector<std::string>& items) {
  std::vector<ComplexRational> out;
  for (const auto& s : items) out.push_back(parse_complex_rational(s));
  return out;
}

PartitionSpec t_partition(const RunConfig& c) { return PartitionSpec::parse(ThetaOracle::parse(c.theta), c.bounds); }

std::vector<ComplexRational> t_values(const RunConfig& c, const PartitionSpec& p) {
  if (c.u.empty()) return digit_values(p);
  auto u = parse_values(c.u);
  PartitionSpec copy = p;
  copy.with_weights_T(u);
  return u;
}

// Largest n <= n_to whose window (w + 1) q_n fits the horizon.
int fit_horizon(const ContinuedFraction& cf, int n_from, int n_to, int w, std::uint64_t horizon) {
  int n = n_to;
  while (n >= n_from && cf.q_at(n) * (w + 1) > static_cast<unsigned long>(horizon)) --n;
  return n;
}

// cf ---------------------------------------------------------------------

void suite_cf(const RunConfig& c, Rows& rows) {
  ThetaOracle theta = ThetaOracle::parse(c.theta);
  ContinuedFraction cf = expand(theta, c.depth);
  {
    bool ok = true;
    for (int m = 0; m <= cf.depth(); ++m) {
      mpz_class det = cf.p_at(m) * cf.q_at(m - 1) - cf.p_at(m - 1) * cf.q_at(m);
      ok = ok && det == ((m % 2) ? 1 : -1);
    }
    auto& r = rows.add("determinant", ok ? Status::Pass : Status::Fail, "exact");
    put(r, "depth", std::to_string(cf.depth()));
    std::string qs;
    for (int m = 0; m <= std::min(cf.depth(), 12); ++m) qs += (m ? " " : "") + cf.quotients[static_cast<std::size_t>(m)].get_str();
    put(r, "quotients", qs);
  }
  {
    Mpfr worst(64);
    mpfr_set_zero(worst.get(), 1);
    bool sign_ok = true;
    for (int m = 0; m <= cf.depth() - 2; ++m) {
      BallReal e = signed_error(cf, m, theta);
      BallReal d = abs(e - signed_error_from_tail(cf, m));
      mpfr_max(worst.get(), worst.get(), d.upper().get(), MPFR_RNDU);
      const bool positive = mpfr_sgn(e.lower().get()) > 0, negative = mpfr_sgn(e.upper().get()) < 0;
      sign_ok = sign_ok && (m % 2 == 0 ? positive : negative);
    }
    Mpfr tol(64);
    mpfr_set_str(tol.get(), "1e-30", 10, MPFR_RNDD);
    auto& r = rows.add("signed-error", mpfr_cmp(worst.get(), tol.get()) < 0 ? Status::Pass : Status::Fail, "1e-30");
    put(r, "max_discrepancy", sci(worst));
    put(r, "levels", std::to_string(cf.depth() - 1));
    auto& s = rows.add("sign-alternation", sign_ok ? Status::Pass : Status::Fail, "exact");
    put(s, "rule", "sign(q_m theta - p_m) = (-1)^m");
  }
  {
    const std::uint64_t limit = std::min<std::uint64_t>(c.horizon, 10000);
    BestApproximationScan scan = best_approximation_scan(theta, limit);
    auto& r = rows.add("best-approximation", scan.violations ? Status::Fail : Status::Pass, "exhaustive");
    put(r, "limit", num(limit));
    put(r, "levels", std::to_string(scan.levels));
    put(r, "comparisons", num(scan.comparisons));
    put(r, "violations", num(scan.violations));
  }
}

// code -------------------------------------------------------------------

void suite_code(const RunConfig& c, Rows& rows) {
  PartitionSpec p = t_partition(c);
  try {
    ConditionCReport rep = check_condition_C(p, 1000);
    auto& r = rows.add("condition-4", rep.violation ? Status::Fail : Status::Pass, "|v| <= 1000");
    put(r, "exact", rep.exact ? "yes" : "no");
    if (rep.violation)
      put(r, "relation", "r" + std::to_string(rep.violation->j) + " - r" + std::to_string(rep.violation->i) + " = " +
                             std::to_string(rep.violation->v) + " t + " + rep.violation->u.get_str());
    if (rep.min_residual) put(r, "min_residual", upper(*rep.min_residual));
    std::string pts;
    for (const auto& lp : rep.lattice_points)
      pts += (pts.empty() ? "" : " ") + ("r" + std::to_string(lp.i) + "=" + std::to_string(lp.v) + "t+" + lp.u.get_str());
    if (!pts.empty()) put(r, "lattice_points", pts);
  } catch (const Inconclusive& e) {
    auto& r = rows.add("condition-4", Status::Inconclusive, "|v| <= 1000");
    put(r, "error", e.what());
  }
  CodingWord word = [&] {
    try {
      return CodingWord(p);
    } catch (const BoundaryHit& e) {
      auto& r = rows.add("orbit-hit", Status::Fail, "exact");
      put(r, "error", e.what());
      throw;
    }
  }();
  {
    const std::uint64_t span = std::min<std::uint64_t>(c.horizon, 200000);
    auto pc = subword_complexity(word, c.complexity_n, span);
    bool ok = true, sturmian = true;
    for (std::size_t k = 0; k < pc.size(); ++k) {
      ok = ok && pc[k] >= k + 2;
      sturmian = sturmian && pc[k] == k + 2;
    }
    auto& r = rows.add("complexity", ok ? Status::Pass : Status::Fail, "p(n) >= n+1");
    put(r, "n_max", std::to_string(c.complexity_n));
    put(r, "p", join(pc));
    put(r, "p_equals_n_plus_1", sturmian ? "yes" : "no");
    put(r, "horizon", num(span));
  }
  {
    const std::uint64_t N = c.horizon;
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(word.alphabet_size()), 0);
    const std::uint64_t block = 1 << 18;
    for (std::uint64_t lo = 0; lo < N; lo += block) {
      auto a = word.letters(lo, std::min(N, lo + block), c.jobs);
      for (int x : a) ++counts[static_cast<std::size_t>(x)];
    }
    double worst = 0;
    for (int i = 0; i < word.alphabet_size(); ++i) {
      const double len = p.r(i + 1, 64).mid_double() - p.r(i, 64).mid_double();
      worst = std::max(worst, std::abs(static_cast<double>(counts[static_cast<std::size_t>(i)]) / static_cast<double>(N) - len));
    }
    const double tol = std::max(1e-3, 50 * std::log(static_cast<double>(N)) / static_cast<double>(N));
    auto& r = rows.add("orbit-scan", worst <= tol ? Status::Pass : Status::Fail, fixed(tol));
    put(r, "horizon", num(N));
    put(r, "counts", join(counts));
    put(r, "max_frequency_deviation", fixed(worst));
  }
}

// approx -----------------------------------------------------------------

void suite_approx(const RunConfig& c, Rows& rows) {
  PartitionSpec p = t_partition(c);
  const auto u = t_values(c, p);
  PartitionSpec pu = p;
  if (!c.u.empty()) pu.with_weights_T(u);
  CodingWord word(pu);
  ContinuedFraction cf = expand(p.theta(), c.depth);
  const int A = p.size();
  std::vector<Base> bases;
  for (const auto& b : c.bases) bases.push_back(Base::parse(b));
  for (int w : c.w) {
    const int n_hi = fit_horizon(cf, c.n_from, c.n_to, w, c.horizon);
    if (n_hi < c.n_to) {
      auto& r = rows.add("horizon w=" + std::to_string(w), Status::Inconclusive, "horizon");
      put(r, "cap", "horizon=" + num(c.horizon));
      put(r, "levels_skipped", std::to_string(c.n_to - n_hi));
    }
    if (n_hi < c.n_from) continue;
    ConditionsReport rep = verify_conditions(word, cf, c.n_from, n_hi, w, 5, c.jobs);
    for (const auto& row : rep.rows) {
      const std::string id = level(row.n) + " w=" + std::to_string(w);
      auto gated = [&](Status s) { return row.asymptotic ? s : Status::NotApplicable; };
      {
        auto& r = rows.add("bpp " + id, gated(row.bpp), "per-window starts <= 2|A|");
        put(r, "q", num(row.q));
        put(r, "asymptotic", row.asymptotic ? "yes" : "no");
        put(r, "t", std::to_string(row.t));
        put(r, "max_window_count", std::to_string(row.max_window_count));
        put(r, "bound", std::to_string(row.bound));
        if (!row.note.empty()) put(r, "note", row.note);
      }
      {
        auto& r = rows.add("t-bound " + id, gated(row.t_bound), "t <= 2|A|");
        put(r, "t", std::to_string(row.t));
        put(r, "bound", std::to_string(2 * A));
        put(r, "with_zero", to_string(row.t_bound_with_zero));
      }
      {
        auto& r = rows.add("lpp " + id, gated(row.lpp), "L >= f0");
        put(r, "stability", num(row.stability));
        put(r, "f0", num(row.f0));
        put(r, "near_boundary", to_string(row.near_boundary));
        if (row.min_gap) put(r, "min_gap", num(*row.min_gap));
      }
      if (!row.asymptotic || row.bpp != Status::Pass) continue;
      Approximant ap = build(word, cf, row.n, w, c.jobs);
      MismatchRecord rec = mismatches(word, ap);
      for (std::size_t k = 0; k < bases.size(); ++k) {
        const std::string bid = "error " + id + " b=" + c.bases[k];
        try {
          ApproximantError e = approximant_error(word, ap, rec, bases[k]);
          auto& r = rows.add(bid, e.status, "2H|b|^-(r+ws)");
          put(r, "residual", upper(e.residual));
          put(r, "bound", upper(e.bound));
          put(r, "small_form", upper(e.small_form));
          put(r, "small_bound", upper(e.small_bound));
          put(r, "residual_literal_correction", upper(e.residual_shifted));
          put(r, "resolved", e.resolved ? "yes" : "no");
          put(r, "periodic_agrees", e.periodic_agrees ? "yes" : "no");
          put(r, "bits", std::to_string(e.bits));
        } catch (const BoundViolated& e) {
          auto& r = rows.add(bid, Status::Fail, "2H|b|^-(r+ws)");
          put(r, "error", e.what());
        }
      }
    }
    auto& r = rows.add("egp w=" + std::to_string(w), rep.egp, "nondecreasing over last 5");
    put(r, "tail", join(rep.egp_tail));
  }
}

// series -----------------------------------------------------------------

void suite_series(const RunConfig& c, Rows& rows) {
  const long D = c.digits;
  const std::string tol = "1e-" + std::to_string(D);
  PartitionSpec p = t_partition(c);
  const auto u = t_values(c, p);
  CodingWord word(p);
  std::vector<Base> bases;
  for (const auto& b : c.bases) bases.push_back(Base::parse(b));
  const int shown = static_cast<int>(std::min<long>(D, 60));

  for (std::size_t k = 0; k < bases.size(); ++k) {
    const std::string b = " b=" + c.bases[k];
    SeriesValue T = eval_T(bases[k], word, u, D, c.jobs);
    auto& r = rows.add("T" + b, radius_below(T.value, -D) ? Status::Pass : Status::Inconclusive, tol);
    put(r, "value", T.describe(shown));
    put(r, "terms_used", num(T.terms_used));
    put(r, "tail_bound", sci(T.tail_bound));
    put(r, "bits", std::to_string(T.bits));
    SeriesValue tele = eval_T_telescoped(bases[k], p, u, D);
    BallReal d = (T.value - tele.value).abs();
    auto& t = rows.add("telescoping" + b, below_pow10(d, -D + 1) ? Status::Pass : Status::Fail, "1e-" + std::to_string(D - 1));
    put(t, "discrepancy", upper(d));
  }

  ConditionCReport cc = check_condition_C(p, 1000);
  if (cc.violation) {
    BoundaryReduction red = reduce_boundary(p, *cc.violation, 1000);
    const long sd = std::min<long>(D, 50);
    ShiftIdentity s = shift_identity(bases.front(), p, red, sd);
    auto& r = rows.add("shift-identity b=" + c.bases.front(), below_pow10(s.discrepancy, -sd) ? Status::Pass : Status::Fail,
                       "1e-" + std::to_string(sd));
    put(r, "v", std::to_string(red.v));
    put(r, "discrepancy", upper(s.discrepancy));
    auto& l = rows.add("shift-identity-literal b=" + c.bases.front(), Status::NotApplicable, "informational");
    put(l, "discrepancy", sci(s.literal_discrepancy.lower()));
  }

  if (!c.s_theta.empty()) {
    ThetaOracle st = ThetaOracle::parse(c.s_theta);
    PartitionSpec sp = PartitionSpec::parse(st, c.s_bounds.empty() ? c.bounds : c.s_bounds);
    sp.with_weights_S(parse_values(c.v));
    std::optional<SReduction> red;
    if (sp.shift() >= 1) red = reduce_S_to_T(sp);
    for (std::size_t k = 0; k < bases.size(); ++k) {
      const std::string b = " b=" + c.bases[k];
      SeriesValue S = eval_S(bases[k], sp, D);
      auto& r = rows.add("S" + b, radius_below(S.value, -D) ? Status::Pass
                                                                                             : Status::Inconclusive,
                         tol);
      put(r, "value", S.describe(shown));
      put(r, "terms_used", num(S.terms_used));
      put(r, "tail_bound", sci(S.tail_bound));
      if (!red) continue;
      SeriesValue T = eval_T(bases[k], CodingWord(red->partition), D, c.jobs);
      BallReal d = (S.value - T.value).abs();
      auto& q = rows.add("reduction" + b, below_pow10(d, -D + 1) ? Status::Pass : Status::Fail, "1e-" + std::to_string(D - 1));
      put(q, "discrepancy", upper(d));
      put(q, "boundaries", red->partition.describe());
      std::string us;
      for (const auto& x : red->u) us += (us.empty() ? "" : " ") + x.to_string();
      put(q, "u", us);
      SeriesValue L = eval_T(bases[k], CodingWord(red->literal_partition), std::min<long>(D, 30), c.jobs);
      auto& l = rows.add("reduction-literal" + b, Status::NotApplicable, "informational");
      put(l, "discrepancy", sci((S.value - L.value).abs().lower()));
    }
    for (const auto& bd : sp.boundaries()) {
      if (!bd.tagged || bd.c1 != 0) continue;
      const std::uint64_t m_max = std::min<std::uint64_t>(10000, c.horizon);
      CountingCheck cnt = counting_oracle(st, bd.c0, m_max);
      auto& r = rows.add("counting r=" + bd.c0.get_str(), cnt.mismatches ? Status::Fail : Status::Pass, "exact");
      put(r, "m_max", num(m_max));
      put(r, "floor_inverse", std::to_string(cnt.floor_inverse));
      put(r, "mismatches", num(cnt.mismatches));
    }
  }

  if (!c.z.empty()) {
    const ComplexRational z = parse_complex_rational(c.z);
    const mpq_class mod = parse_rational(c.modulus);
    for (bool cosine : {true, false}) {
      const char* name = cosine ? "cosine" : "sine";
      try {
        TrigPair tp = cosine ? cosine_pair(mod, z, D) : sine_pair(mod, z, D);
        auto& r = rows.add(name, below_pow10(tp.discrepancy, -D + 1) ? Status::Pass : Status::Fail, "1e-" + std::to_string(D - 1));
        put(r, "discrepancy", upper(tp.discrepancy));
        put(r, "direct", tp.direct.mid_decimal(shown));
        put(r, "terms_used", num(tp.terms_used));
      } catch (const RootOfUnity& e) {
        auto& r = rows.add(name, Status::Fail, "exact");
        put(r, "error", e.what());
      }
    }
    const ComplexRational m(mod);
    IndependenceWitness iw = multiplicative_independence(m * z.conj(), m * z, 50);
    auto& r = rows.add("independence", iw.coincidences == 0 && iw.equal_modulus_off_diagonal == 0 ? Status::Pass : Status::Fail,
                       "exponents <= 50");
    put(r, "pairs", std::to_string(iw.pairs_checked));
    put(r, "coincidences", std::to_string(iw.coincidences));
    put(r, "equal_modulus_off_diagonal", std::to_string(iw.equal_modulus_off_diagonal));
  }
}

// structure --------------------------------------------------------------

void suite_structure(const RunConfig& c, Rows& rows) {
  PartitionSpec p = t_partition(c);
  CodingWord word(p);
  ContinuedFraction cf = expand(p.theta(), c.depth);
  const double eta = p.eta().mid_double();
  const int wmax = *std::max_element(c.census_w.begin(), c.census_w.end());
  const int n_hi = fit_horizon(cf, c.n_from, c.n_to, wmax, c.horizon);
  if (n_hi < c.n_to) {
    auto& r = rows.add("horizon", Status::Inconclusive, "horizon");
    put(r, "cap", "horizon=" + num(c.horizon));
    put(r, "levels_skipped", std::to_string(c.n_to - n_hi));
  }
  if (n_hi >= c.n_from) {
    CensusReport rep = gap_census(word, cf, c.n_from, n_hi, c.census_w, c.epsilon, c.jobs);
    auto& r = rows.add("census", Status::NotApplicable, "evidence");
    put(r, "epsilon", fixed(c.epsilon));
    put(r, "classification", rep.iv1_like ? "iv.1-like" : rep.iv2_like ? "iv.2-like" : "undecided");
    std::string fr;
    int hit = 0;
    for (const auto& cell : rep.cells) {
      if (cell.free && !cell.degenerate) fr += (fr.empty() ? "" : " ") + level(cell.n) + ":w=" + std::to_string(cell.w);
      hit += !cell.free;
    }
    put(r, "free_windows", fr.empty() ? "none" : fr);
    put(r, "hit_windows", std::to_string(hit));
    std::string kp;
    for (const auto& [g, l] : rep.kappa_pairs) kp += (kp.empty() ? "" : " ") + std::to_string(g) + ":" + fixed(l);
    put(r, "kappa_gap_log_kappa1", kp);
    auto& m = rows.add("iw-monotone", rep.monotone_in_w ? Status::Pass : Status::Fail, "I_w subset of I_w'");
    put(m, "windows", [&] {
      std::string s;
      for (int w : c.census_w) s += (s.empty() ? "" : " ") + std::to_string(w);
      return s;
    }());
  }
  for (int w : c.w) {
    const int hi = fit_horizon(cf, c.n_from, c.n_to, w, c.horizon);
    for (int n = c.n_from; n <= hi; ++n) {
      const std::string id = level(n) + " w=" + std::to_string(w);
      IwSet iw = compute_I_w(word, cf, n, w, c.jobs);
      const bool asym = eta * static_cast<double>(iw.q) > 2.0 * (w + 1);
      Status s = iw.max_multiplicity <= 2 && iw.near_boundary ? Status::Pass : Status::Fail;
      auto& r = rows.add("iw " + id, asym ? s : Status::NotApplicable, "multiplicity <= 2");
      put(r, "size", std::to_string(iw.members.size()));
      put(r, "max_multiplicity", std::to_string(iw.max_multiplicity));
      put(r, "near_boundary", iw.near_boundary ? "yes" : "no");

      Approximant ap = build(word, cf, n, w, c.jobs);
      const std::set<std::uint64_t> members = [&] {
        auto v = iw.residues();
        return std::set<std::uint64_t>(v.begin(), v.end());
      }();
      std::uint64_t outside = 0, zero = 0;
      for (std::uint64_t j = 2 * ap.q; j < ap.window_end(); ++j) {
        if (ap.values[static_cast<std::size_t>(ap.letters[j])] == ap.values[static_cast<std::size_t>(ap.letter(j))]) continue;
        if (j % ap.q == 0) ++zero;
        else if (!members.count(j % ap.q)) ++outside;
      }
      auto& q = rows.add("residues " + id, outside == 0 && (zero == 0 || !asym) ? Status::Pass : Status::Fail,
                         "mismatch residues in I_w");
      put(q, "outside", num(outside));
      put(q, "residue_zero", num(zero));

      TailChangeRecord t = tail_changes(word, ap, std::min<std::uint64_t>(ap.q * ap.q_next, c.horizon));
      auto& k = rows.add("kappa " + id, Status::NotApplicable, "evidence");
      put(k, "kappa", join(t.kappa));
      put(k, "search_limit", num(t.search_limit));
      if (t.gap()) {
        put(k, "gap", num(*t.gap()));
        put(k, "ratio", fixed(*t.ratio()));
        put(k, "log_kappa1", fixed(*t.log_kappa1()));
        put(k, "pair_residual", upper(*t.pair_residual));
        put(k, "same_boundary", t.same_boundary ? "yes" : "no");
      } else {
        put(k, "not_found", "yes");
      }
    }
  }
}

const std::map<std::string, std::function<void(const RunConfig&, Rows&)>>& suites() {
  static const std::map<std::string, std::function<void(const RunConfig&, Rows&)>> table{
      {"cf", suite_cf}, {"code", suite_code}, {"approx", suite_approx}, {"series", suite_series},
      {"structure", suite_structure}};
  return table;
}

const std::vector<std::string> kOrder{"cf", "code", "approx", "series", "structure"};

}  // namespace

std::vector<CheckRow> run_suite(const RunConfig& config, const std::string& suite) {
  auto it = suites().find(suite);
  if (it == suites().end()) throw InvalidArgument("unknown suite '" + suite + "'");
  Rows rows(suite, config.timings);
  try {
    it->second(config, rows);
  } catch (const PrecisionExhausted& e) {
    auto& r = rows.add("aborted", Status::Inconclusive, "precision_cap=" + std::to_string(config.precision_cap));
    put(r, "error", e.what());
  } catch (const Inconclusive& e) {
    auto& r = rows.add("aborted", Status::Inconclusive, "");
    put(r, "error", e.what());
  } catch (const std::exception& e) {
    auto& r = rows.add("aborted", Status::Fail, "");
    put(r, "error", e.what());
  }
  return rows.take();
}

Report run(const RunConfig& config) {
  validate(config);
  set_precision_cap(config.precision_cap);
  Report report;
  report.config = config;
  std::vector<std::string> todo;
  for (const auto& s : kOrder)
    if (std::find(config.suites.begin(), config.suites.end(), s) != config.suites.end()) todo.push_back(s);
  std::vector<std::vector<CheckRow>> parts(todo.size());
  const int jobs = std::max(1, std::min<int>(config.jobs, static_cast<int>(todo.size())));
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j)
    pool.emplace_back([&, j] {
      for (std::size_t k = static_cast<std::size_t>(j); k < todo.size(); k += static_cast<std::size_t>(jobs))
        parts[k] = run_suite(config, todo[k]);
    });
  for (auto& t : pool) t.join();
  for (auto& part : parts)
    for (auto& r : part) report.rows.push_back(std::move(r));
  return report;
}

}  // namespace rotcode
