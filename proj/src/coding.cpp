#include "rotcode/coding.hpp"

#include <algorithm>
#include <thread>
#include <unordered_set>

#include "rotcode/error.hpp"

namespace rotcode {

namespace {

using u128 = unsigned __int128;

long bit_length(std::uint64_t n) {
  long b = 0;
  while (n) ++b, n >>= 1;
  return b;
}

bool is_integer(const mpq_class& q) { return q.get_den() == 1; }

mpq_class pow10_inv(long places) {
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(places));
  return mpq_class(1, den);
}

u128 to_u128(const mpz_class& z) {
  mpz_class lo = z & mpz_class("18446744073709551615");
  mpz_class hi = z >> 64;
  return (static_cast<u128>(hi.get_ui()) << 64) | lo.get_ui();
}

// floor(x * 2^128) of a ball midpoint, plus an error bound in units of 2^-128.
std::pair<u128, u128> to_fixed(const BallReal& x) {
  Mpfr s(x.prec() + 8);
  mpfr_mul_2ui(s.get(), x.mid().get(), 128, MPFR_RNDN);
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), s.get(), MPFR_RNDD);
  u128 v = to_u128(z);
  Mpfr e(kRadiusPrec);
  mpfr_mul_2ui(e.get(), x.rad().get(), 128, MPFR_RNDU);
  mpfr_add_ui(e.get(), e.get(), 2, MPFR_RNDU);
  u128 err;
  if (mpfr_cmp_ui_2exp(e.get(), 1, 100) >= 0) {
    err = static_cast<u128>(1) << 100;
  } else {
    mpz_class ez;
    mpfr_get_z(ez.get_mpz_t(), e.get(), MPFR_RNDU);
    err = to_u128(ez);
  }
  return {v, err};
}

u128 circ_dist(u128 a, u128 b) {
  u128 d = a - b;
  u128 e = b - a;
  return d < e ? d : e;
}

// Splits "a+b-c" into signed terms, keeping signs inside "1/-2"-free rationals.
std::vector<std::string> signed_terms(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if ((c == '+' || c == '-') && !cur.empty() && cur.back() != '*' && cur.back() != '/') {
      out.push_back(cur);
      cur.clear();
    }
    cur.push_back(c);
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

Boundary parse_boundary(const std::string& raw, const mpz_class& shift) {
  std::string s;
  for (char c : raw)
    if (c != ' ') s.push_back(c);
  if (s.empty()) throw ConstructionError("empty boundary");
  if (s[0] == '~') {
    std::string lit = s.substr(1);
    auto dot = lit.find('.');
    long places = dot == std::string::npos ? 0 : static_cast<long>(lit.size() - dot - 1);
    return Boundary::opaque(parse_rational(lit), pow10_inv(places), raw);
  }
  mpq_class c0 = 0, c1 = 0;
  for (std::string term : signed_terms(s)) {
    mpq_class sign = 1;
    if (term[0] == '+' || term[0] == '-') {
      if (term[0] == '-') sign = -1;
      term = term.substr(1);
    }
    auto pos = term.find("theta");
    if (pos == std::string::npos) {
      c0 += sign * parse_rational(term);
      continue;
    }
    std::string coef = term.substr(0, pos) + term.substr(pos + 5);
    if (!coef.empty() && coef.front() == '*') coef.erase(coef.begin());
    if (!coef.empty() && coef.back() == '*') coef.pop_back();
    c1 += sign * (coef.empty() ? mpq_class(1) : parse_rational(coef));
  }
  // theta = t + shift.
  c0 += c1 * shift;
  return Boundary::exact(c0, c1, raw);
}

}  // namespace

Boundary Boundary::exact(mpq_class c0, mpq_class c1, std::string text) {
  Boundary b;
  c0.canonicalize();
  c1.canonicalize();
  b.tagged = true;
  b.c0 = c0;
  b.c1 = c1;
  b.text = std::move(text);
  return b;
}

Boundary Boundary::opaque(mpq_class mid, mpq_class rad, std::string text) {
  Boundary b;
  b.mid = mid;
  b.rad = abs(rad);
  b.text = std::move(text);
  return b;
}

BallReal Boundary::ball(const BallReal& t) const {
  const mpfr_prec_t p = t.prec();
  if (!tagged) return BallReal::from_mpq(mid, rad, p);
  BallReal r = BallReal::from_mpq(c0, p);
  if (c1 != 0) r += BallReal::from_mpq(c1, p) * t;
  return r;
}

std::string Boundary::describe() const {
  if (!tagged) return text.empty() ? "~" + mid.get_str() : text;
  if (c1 == 0) return c0.get_str();
  std::string s = c0 == 0 ? "" : c0.get_str();
  if (c1 == 1) {
    s += s.empty() ? "t" : "+t";
  } else if (c1 == -1) {
    s += "-t";
  } else {
    if (c1 > 0 && !s.empty()) s += "+";
    s += c1.get_str() + "*t";
  }
  return s;
}

PartitionSpec::PartitionSpec(ThetaOracle theta, std::vector<Boundary> boundaries)
    : theta_(std::move(theta)), boundaries_(std::move(boundaries)) {
  if (boundaries_.empty()) throw ConstructionError("a partition needs at least one boundary");
  shift_ = escalate(
      64, [&](long bits) { return theta_.refine(bits).floor(); }, "floor of theta");
  // Reduce tagged boundaries mod 1.
  for (auto& b : boundaries_) {
    if (!b.tagged) continue;
    if (b.c1 == 0) {
      mpz_class k;
      mpz_fdiv_q(k.get_mpz_t(), b.c0.get_num_mpz_t(), b.c0.get_den_mpz_t());
      b.c0 -= k;
      if (b.c0 == 0) throw ConstructionError("boundary '" + b.describe() + "' is an integer");
      continue;
    }
    mpz_class k = escalate(
        64, [&](long bits) { return b.ball(t(bits)).floor(); }, "floor of boundary " + b.describe());
    b.c0 -= k;
  }
  for (const auto& b : boundaries_) {
    if (b.tagged) continue;
    BallReal x = b.ball(t(64));
    if (mpfr_sgn(x.lower().get()) <= 0 || mpfr_cmp_ui(x.upper().get(), 1) >= 0)
      throw ConstructionError("opaque boundary '" + b.describe() + "' is not certified inside (0, 1)");
  }
  for (std::size_t a = 0; a < boundaries_.size(); ++a)
    for (std::size_t c = a + 1; c < boundaries_.size(); ++c)
      if (boundaries_[a].tagged && boundaries_[c].tagged && boundaries_[a].c0 == boundaries_[c].c0 &&
          boundaries_[a].c1 == boundaries_[c].c1)
        throw ConstructionError("duplicate boundary " + boundaries_[a].describe());
  long bits = 128;
  for (;; bits *= 2) {
    BallReal tb = t(bits);
    std::vector<std::pair<BallReal, Boundary>> keyed;
    for (auto& b : boundaries_) keyed.emplace_back(b.ball(tb), b);
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& x, const auto& y) { return mpfr_less_p(x.first.mid().get(), y.first.mid().get()); });
    bool ok = true;
    for (std::size_t i = 0; i + 1 < keyed.size(); ++i)
      ok = ok && certified_compare(keyed[i].first, keyed[i + 1].first) == Ordering3::Less;
    if (ok) {
      boundaries_.clear();
      for (auto& kb : keyed) boundaries_.push_back(std::move(kb.second));
      break;
    }
    if (bits >= precision_cap()) throw ConstructionError("boundaries cannot be ordered at the precision cap");
  }
}

PartitionSpec PartitionSpec::parse(const ThetaOracle& theta, const std::string& bounds) {
  mpz_class shift = escalate(
      64, [&](long bits) { return theta.refine(bits).floor(); }, "floor of theta");
  std::vector<Boundary> bs;
  std::string cur;
  for (char c : bounds + ",") {
    if (c == ',') {
      if (!cur.empty()) {
        try {
          bs.push_back(parse_boundary(cur, shift));
        } catch (const InvalidArgument& e) {
          throw ConstructionError("bad boundary '" + cur + "': " + e.what());
        }
      }
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  return PartitionSpec(theta, std::move(bs));
}

PartitionSpec& PartitionSpec::with_weights_T(std::vector<ComplexRational> u) {
  if (static_cast<int>(u.size()) != size() + 1)
    throw ConstructionError("weights u need " + std::to_string(size() + 1) + " entries");
  for (std::size_t i = 0; i + 1 < u.size(); ++i)
    if (u[i] == u[i + 1])
      throw ConstructionError("weights u_" + std::to_string(i) + " and u_" + std::to_string(i + 1) + " coincide");
  u_ = std::move(u);
  return *this;
}

PartitionSpec& PartitionSpec::with_weights_S(std::vector<ComplexRational> v) {
  if (static_cast<int>(v.size()) != size())
    throw ConstructionError("weights v need " + std::to_string(size()) + " entries");
  if (std::all_of(v.begin(), v.end(), [](const ComplexRational& x) { return x.is_zero(); }))
    throw ConstructionError("weights v must not all vanish");
  v_ = std::move(v);
  return *this;
}

BallReal PartitionSpec::t(long bits) const {
  BallReal x = theta_.refine(bits + 2);
  if (shift_ == 0) return x;
  return x - BallReal::from_mpz(shift_, x.prec());
}

BallReal PartitionSpec::r(int i, long bits) const {
  if (i < 0 || i > size() + 1) throw InvalidArgument("boundary index out of range");
  if (i == 0) return BallReal(static_cast<mpfr_prec_t>(bits + 8));
  if (i == size() + 1) return BallReal::from_int(1, static_cast<mpfr_prec_t>(bits + 8));
  return boundaries_[static_cast<std::size_t>(i - 1)].ball(t(bits + 8));
}

BallReal PartitionSpec::eta(long bits) const {
  std::optional<Mpfr> lo, hi;
  for (int i = 0; i <= size(); ++i) {
    BallReal g = r(i + 1, bits) - r(i, bits);
    Mpfr l = g.lower(), h = g.upper();
    if (!lo) {
      lo = l, hi = h;
    } else {
      mpfr_min(lo->get(), lo->get(), l.get(), MPFR_RNDD);
      mpfr_min(hi->get(), hi->get(), h.get(), MPFR_RNDU);
    }
  }
  return BallReal::from_bounds(*lo, *hi, static_cast<mpfr_prec_t>(bits));
}

PartitionSpec PartitionSpec::without(int k) const {
  std::vector<Boundary> bs = boundaries_;
  bs.erase(bs.begin() + k);
  return PartitionSpec(theta_, std::move(bs));
}

std::string PartitionSpec::describe() const {
  std::string s = "{";
  for (std::size_t i = 0; i < boundaries_.size(); ++i) s += (i ? ", " : "") + boundaries_[i].describe();
  return s + "}";
}

CodingWord::CodingWord(PartitionSpec partition) : partition_(std::move(partition)) {
  int idx = 1;
  for (const auto& b : partition_.boundaries()) {
    if (b.tagged && is_integer(b.c0) && is_integer(b.c1) && b.c1 >= 1)
      throw BoundaryHit("orbit point n = " + b.c1.get_str() + " equals boundary r_" + std::to_string(idx) + " = " +
                        b.describe());
    ++idx;
  }
  BallReal tb = partition_.t(200);
  auto [step, step_err] = to_fixed(tb);
  if (step_err > 4) return;
  step_ = step;
  for (int i = 1; i <= partition_.size(); ++i) {
    auto [c, e] = to_fixed(partition_.r(i, 200));
    cuts_.push_back(c);
    cut_err_ = std::max(cut_err_, e);
  }
  fast_ok_ = cut_err_ < (static_cast<u128>(1) << 100);
}

std::optional<int> CodingWord::fast_letter(std::uint64_t n) const {
  if (n == 0) return 0;
  if (!fast_ok_ || n >= (std::uint64_t{1} << 60)) return std::nullopt;
  const u128 p = static_cast<u128>(n) * step_;
  const u128 err = static_cast<u128>(n) * 4 + cut_err_ + 1;
  if (p <= err || p >= static_cast<u128>(0) - err) return std::nullopt;
  int k = 0;
  for (u128 c : cuts_) {
    if (circ_dist(p, c) <= err) return std::nullopt;
    if (c < p) ++k;
  }
  return k;
}

BallReal CodingWord::orbit_point(std::uint64_t n, long bits) const {
  const long extra = bit_length(n) + 4;
  return escalate(
      bits,
      [&](long b) -> std::optional<BallReal> {
        BallReal x = partition_.t(b + extra) * mpz_class(static_cast<unsigned long>(n));
        auto f = x.frac();
        if (!f || !f->radius_le_pow2(1 - bits)) return std::nullopt;
        return f;
      },
      "orbit point " + std::to_string(n));
}

int CodingWord::slow_letter(std::uint64_t n) const {
  if (n == 0) return 0;
  return escalate(
      96 + 2 * bit_length(n),
      [&](long bits) -> std::optional<int> {
        BallReal x = orbit_point(n, bits);
        int k = 0;
        for (int i = 1; i <= partition_.size(); ++i) {
          switch (certified_compare(x, partition_.r(i, bits))) {
            case Ordering3::Greater: ++k; break;
            case Ordering3::Less: break;
            case Ordering3::Undecided: return std::nullopt;
          }
        }
        return k;
      },
      "letter at n = " + std::to_string(n));
}

int CodingWord::letter(std::uint64_t n) const {
  if (auto k = fast_letter(n)) return *k;
  return slow_letter(n);
}

std::vector<int> CodingWord::letters(std::uint64_t begin, std::uint64_t end, int jobs) const {
  std::vector<int> out(end > begin ? end - begin : 0);
  const std::uint64_t total = out.size();
  jobs = std::max(1, jobs);
  if (jobs == 1 || total < 4096) {
    for (std::uint64_t k = 0; k < total; ++k) out[k] = letter(begin + k);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
  const std::uint64_t chunk = (total + jobs - 1) / jobs;
  for (int j = 0; j < jobs; ++j) {
    pool.emplace_back([&, j] {
      try {
        const std::uint64_t lo = j * chunk, hi = std::min(total, lo + chunk);
        for (std::uint64_t k = lo; k < hi; ++k) out[k] = letter(begin + k);
      } catch (...) {
        errors[static_cast<std::size_t>(j)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

int letter_at(const CodingWord& word, std::uint64_t n) { return word.letter(n); }

std::vector<int> delta_vector(const CodingWord& word, std::uint64_t n) {
  std::vector<int> d(static_cast<std::size_t>(word.alphabet_size()), 0);
  d[static_cast<std::size_t>(word.letter(n))] = 1;
  return d;
}

ConditionCReport check_condition_C(const PartitionSpec& partition, long v_bound) {
  if (v_bound < 1) throw InvalidArgument("v_bound must be at least 1");
  ConditionCReport rep;
  const auto& bs = partition.boundaries();
  const int l = partition.size();
  // Index 0 stands for the boundary r_0 = 0.
  auto get = [&](int i) { return i == 0 ? Boundary::exact(0, 0) : bs[static_cast<std::size_t>(i - 1)]; };
  const long base_bits = 128 + 2 * bit_length(static_cast<std::uint64_t>(v_bound));
  for (int i = 0; i <= l; ++i) {
    for (int j = std::max(i + 1, 1); j <= l; ++j) {
      const Boundary bi = get(i), bj = get(j);
      const bool tagged = bi.tagged && bj.tagged;
      if (!tagged) rep.exact = false;
      std::optional<long> exact_v;
      if (tagged) {
        mpq_class d0 = bj.c0 - bi.c0, d1 = bj.c1 - bi.c1;
        if (is_integer(d0) && is_integer(d1) && d1 != 0 && abs(d1) <= v_bound) {
          exact_v = d1.get_num().get_si();
          if (i == 0) {
            rep.lattice_points.push_back({j, *exact_v, d0.get_num()});
          } else if (!rep.violation) {
            rep.violation = LatticeRelation{i, j, *exact_v, d0.get_num()};
          }
        }
      }
      for (long v = -v_bound; v <= v_bound; ++v) {
        if (exact_v && v == *exact_v) continue;
        if (tagged && v == 0 && bj.c1 == bi.c1 && is_integer(bj.c0 - bi.c0)) continue;
        auto residual = [&](long bits) -> std::optional<BallReal> {
          BallReal tb = partition.t(bits);
          BallReal x = bj.ball(tb) - bi.ball(tb) - tb * v;
          auto f = x.frac();
          if (!f || f->contains_zero()) return std::nullopt;
          BallReal g = BallReal::from_int(1, f->prec()) - *f;
          if (g.contains_zero()) return std::nullopt;
          return certified_compare(*f, g) == Ordering3::Greater ? g : *f;
        };
        std::optional<BallReal> res;
        if (tagged) {
          res = escalate(base_bits, residual, "condition (4) residual");
        } else {
          res = residual(base_bits);
          if (!res)
            throw Inconclusive("residual of r_" + std::to_string(j) + " - r_" + std::to_string(i) + " - " +
                               std::to_string(v) + " t is below the resolution of the opaque boundaries");
        }
        if (!rep.min_residual || mpfr_less_p(res->mid().get(), rep.min_residual->mid().get())) {
          rep.min_residual = res;
          rep.min_residual_at = LatticeRelation{i, j, v, 0};
        }
      }
    }
  }
  return rep;
}

BoundaryReduction reduce_boundary(const PartitionSpec& partition, const LatticeRelation& rel, long v_bound) {
  if (rel.v == 0) throw InvalidArgument("a relation with v = 0 cannot hold between distinct boundaries");
  if (std::labs(rel.v) > v_bound) throw InvalidArgument("relation shift exceeds the search bound");
  const int l = partition.size();
  if (rel.i < 1 || rel.j < 1 || rel.i > l || rel.j > l || rel.i == rel.j)
    throw InvalidArgument("relation indices out of range");
  const auto& bs = partition.boundaries();
  const Boundary& bi = bs[static_cast<std::size_t>(rel.i - 1)];
  const Boundary& bj = bs[static_cast<std::size_t>(rel.j - 1)];
  if (!bi.tagged || !bj.tagged) throw InvalidArgument("only exactly tagged boundaries admit a certified relation");
  if (bj.c1 - bi.c1 != rel.v || bj.c0 - bi.c0 != rel.u)
    throw InvalidArgument("r_j - r_i differs from v t + u");
  BoundaryReduction out{partition.without(rel.v > 0 ? rel.j - 1 : rel.i - 1), 0, 0, 0, 0, {}, false, {}};
  out.removed = rel.v > 0 ? rel.j : rel.i;
  out.kept = rel.v > 0 ? rel.i : rel.j;
  out.v = std::labs(rel.v);
  out.u = rel.v > 0 ? rel.u : mpz_class(-rel.u);
  out.plus_one = out.removed > out.kept;
  out.extra = Boundary::exact(mpq_class(-out.u + (out.plus_one ? 1 : 0)), mpq_class(-out.v), "frac(-v t)");
  const Boundary& br = bs[static_cast<std::size_t>(out.removed - 1)];
  CodingWord single(PartitionSpec(partition.theta(), {br}));
  for (long n = 0; n < out.v; ++n)
    if (single.letter(static_cast<std::uint64_t>(n)) == 0) out.prefix.push_back(static_cast<std::uint64_t>(n));
  return out;
}

std::vector<std::uint64_t> subword_complexity(const std::vector<int>& letters, int n_max) {
  std::vector<std::uint64_t> p;
  std::string s;
  s.reserve(letters.size());
  for (int x : letters) s.push_back(static_cast<char>(x));
  for (int n = 1; n <= n_max; ++n) {
    std::unordered_set<std::string_view> seen;
    for (std::size_t k = 0; k + static_cast<std::size_t>(n) <= s.size(); ++k)
      seen.insert(std::string_view(s).substr(k, static_cast<std::size_t>(n)));
    p.push_back(seen.size());
  }
  return p;
}

std::vector<std::uint64_t> subword_complexity(const CodingWord& word, int n_max, std::uint64_t horizon) {
  if (n_max < 1) throw InvalidArgument("n_max must be positive");
  if (horizon == 0) horizon = 10ull * static_cast<std::uint64_t>(n_max) * static_cast<std::uint64_t>(n_max);
  if (horizon < static_cast<std::uint64_t>(n_max) + 1) throw InvalidArgument("horizon shorter than n_max + 1");
  return subword_complexity(word.letters(0, horizon), n_max);
}

}  // namespace rotcode
