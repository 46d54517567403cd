#include "rotcode/structure.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <set>
#include <thread>

namespace rotcode {

namespace {

constexpr long kBits = 128;
constexpr std::uint64_t kBlock = 1 << 16;
constexpr std::uint64_t kKappaHorizon = 1 << 24;

std::uint64_t to_u64(const mpz_class& z) {
  if (z < 0 || mpz_sizeinbase(z.get_mpz_t(), 2) > 62) throw InvalidArgument("denominator out of range");
  return static_cast<std::uint64_t>(z.get_ui());
}

// ||z|| measured from the integer nearest the midpoint.
BallReal dist_to_int(const BallReal& z) {
  Mpfr k(z.prec());
  mpfr_round(k.get(), z.mid().get());
  Mpfr zero(kRadiusPrec);
  mpfr_set_zero(zero.get(), 1);
  return abs(z - BallReal(k, zero));
}

std::pair<int, BallReal> nearest_boundary(const PartitionSpec& part, const BallReal& x) {
  int best = 0;
  BallReal d = dist_to_int(x);
  for (int k = 1; k <= part.size(); ++k) {
    BallReal e = dist_to_int(x - part.r(k, kBits));
    if (mpfr_less_p(e.mid().get(), d.mid().get())) {
      best = k;
      d = e;
    }
  }
  return {best, d};
}

// First mismatch of each residue class inside the approximant window.
std::vector<std::uint64_t> class_starts(const Approximant& ap) {
  std::map<std::uint64_t, std::uint64_t> first;
  for (std::uint64_t j = 2 * ap.q; j < ap.window_end(); ++j) {
    const auto& a = ap.values[static_cast<std::size_t>(ap.letters[j])];
    const auto& b = ap.values[static_cast<std::size_t>(ap.letter(j))];
    if (!(a == b)) first.emplace(j % ap.q, j);
  }
  std::vector<std::uint64_t> out;
  for (const auto& [res, j] : first) out.push_back(j);
  std::sort(out.begin(), out.end());
  return out;
}

template <class F>
void parallel_for(std::size_t count, int jobs, F f) {
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(count)));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j)
    pool.emplace_back([&, j] {
      try {
        for (std::size_t i; (i = next++) < count;) f(i);
      } catch (...) {
        errors[static_cast<std::size_t>(j)] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

std::vector<std::uint64_t> IwSet::residues() const {
  std::vector<std::uint64_t> out;
  for (const auto& m : members) out.push_back(m.M);
  return out;
}

IwSet compute_I_w(const CodingWord& word, const ContinuedFraction& cf, int N, int w, int jobs) {
  if (w < 0) throw InvalidArgument("window w must be nonnegative");
  if (N < 0 || N >= cf.depth()) throw InvalidArgument("level " + std::to_string(N) + " is beyond the expansion");
  IwSet out;
  out.level = N;
  out.window = w;
  out.q = to_u64(cf.q_at(N));
  const PartitionSpec& part = word.partition();
  out.step_distance = nearest_distance(cf.q_at(N), part.theta());
  if (w == 0) return out;
  const std::uint64_t q = out.q;
  const std::vector<int> a = word.letters(0, (static_cast<std::uint64_t>(w) + 1) * q, jobs);
  const BallReal reach = out.step_distance * static_cast<long>(w + 1);
  std::map<std::pair<int, int>, int> shared;
  for (std::uint64_t M = 1; M < q; ++M) {
    int step = 0;
    for (int l = 1; l <= w && !step; ++l)
      if (a[M + static_cast<std::uint64_t>(l) * q] != a[M + static_cast<std::uint64_t>(l - 1) * q]) step = l;
    if (!step) continue;
    auto [k, d] = nearest_boundary(part, word.orbit_point(M, kBits));
    if (certified_compare(d, reach) == Ordering3::Greater) out.near_boundary = false;
    out.max_multiplicity = std::max(out.max_multiplicity, ++shared[{step, k}]);
    out.members.push_back({M, step, k, d});
  }
  return out;
}

std::optional<std::uint64_t> TailChangeRecord::gap() const {
  if (kappa.size() < 2) return std::nullopt;
  return kappa[1] - kappa[0];
}

std::optional<double> TailChangeRecord::ratio() const {
  if (kappa.size() < 2) return std::nullopt;
  return static_cast<double>(kappa[1]) / (static_cast<double>(q) * static_cast<double>(q_next));
}

std::optional<double> TailChangeRecord::log_kappa1() const {
  if (kappa.empty()) return std::nullopt;
  return std::log(static_cast<double>(kappa[0]));
}

TailChangeRecord tail_changes(const CodingWord& word, const Approximant& approx, std::uint64_t search_limit,
                              int count) {
  TailChangeRecord rec;
  rec.level = approx.level;
  rec.window = approx.window;
  rec.q = approx.q;
  rec.q_next = approx.q_next;
  rec.search_limit = search_limit ? search_limit : approx.q * approx.q_next;
  const std::uint64_t q = approx.q;
  std::set<std::uint64_t> excluded;
  for (std::uint64_t j : class_starts(approx)) excluded.insert(j % q);
  const auto& val = approx.values;
  for (std::uint64_t lo = approx.window_end() + 1; lo < rec.search_limit && static_cast<int>(rec.kappa.size()) < count;
       lo += kBlock) {
    const std::uint64_t hi = std::min(rec.search_limit, lo + kBlock);
    const std::vector<int> a = word.letters(lo, hi);
    for (std::uint64_t p = lo; p < hi && static_cast<int>(rec.kappa.size()) < count; ++p) {
      const std::uint64_t res = p % q;
      if (excluded.count(res)) continue;
      const std::uint64_t pbar = q + (res == 0 ? q : res);
      if (!(val[static_cast<std::size_t>(a[p - lo])] == val[static_cast<std::size_t>(approx.letters[pbar])]))
        rec.kappa.push_back(p);
    }
  }
  rec.not_found = static_cast<int>(rec.kappa.size()) < count;
  if (rec.kappa.size() >= 2) {
    const PartitionSpec& part = word.partition();
    BallReal x = word.orbit_point(rec.kappa[1] - rec.kappa[0], kBits);
    for (int i = 0; i <= part.size(); ++i)
      for (int j = 0; j <= part.size(); ++j) {
        BallReal d = dist_to_int(x - (part.r(i, kBits) - part.r(j, kBits)));
        if (!rec.pair_residual || mpfr_less_p(d.mid().get(), rec.pair_residual->mid().get())) {
          rec.pair_residual = d;
          rec.pair_i = i;
          rec.pair_j = j;
        }
      }
    rec.same_boundary = nearest_boundary(part, word.orbit_point(rec.kappa[0], kBits)).first ==
                        nearest_boundary(part, word.orbit_point(rec.kappa[1], kBits)).first;
  }
  return rec;
}

CensusReport gap_census(const CodingWord& word, const ContinuedFraction& cf, int n_from, int n_to,
                        const std::vector<int>& w_list, double epsilon, int jobs) {
  CensusReport rep;
  rep.epsilon = epsilon;
  std::vector<int> ws = w_list;
  std::sort(ws.begin(), ws.end());
  ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
  if (ws.empty() || n_to < n_from) return rep;

  std::vector<std::pair<int, int>> grid;
  for (int n = n_from; n <= n_to; ++n)
    for (int w : ws) grid.emplace_back(n, w);
  rep.cells.resize(grid.size());
  parallel_for(grid.size(), jobs, [&](std::size_t k) {
    auto [n, w] = grid[k];
    Approximant ap = build(word, cf, n, w);
    CensusCell& c = rep.cells[k];
    c.n = n;
    c.w = w;
    c.q = ap.q;
    c.starts = class_starts(ap);
    c.window_hi = ap.window_end();
    c.degenerate = epsilon >= 1;
    const double lo = static_cast<double>(ap.q) + std::ceil(epsilon * w * static_cast<double>(ap.q));
    c.window_lo = c.degenerate ? c.window_hi : static_cast<std::uint64_t>(lo);
    if (!c.degenerate)
      for (std::uint64_t s : c.starts)
        if (s >= c.window_lo && s <= c.window_hi) c.hits.push_back(s);
    c.free = c.hits.empty();
  });

  bool any_free = false, all_hit = true, any_cell = false;
  for (const auto& c : rep.cells) {
    if (c.degenerate) continue;
    any_cell = true;
    any_free = any_free || c.free;
    all_hit = all_hit && !c.free;
  }
  rep.iv1_like = any_free;
  rep.iv2_like = any_cell && all_hit;

  const int L = 2 * word.partition().size() + 1;
  const std::size_t levels = static_cast<std::size_t>(n_to - n_from + 1);
  std::vector<bool> monotone(levels, true);
  std::vector<TailChangeRecord> tails(levels);
  parallel_for(levels, jobs, [&](std::size_t k) {
    const int n = n_from + static_cast<int>(k);
    std::vector<std::uint64_t> prev;
    for (int w : ws) {
      std::vector<std::uint64_t> cur = compute_I_w(word, cf, n, w).residues();
      if (!std::includes(cur.begin(), cur.end(), prev.begin(), prev.end())) monotone[k] = false;
      prev = std::move(cur);
    }
    Approximant ap = build(word, cf, n, ws.front());
    tails[k] = tail_changes(word, ap, std::min(ap.q * ap.q_next, kKappaHorizon), L);
  });
  rep.monotone_in_w = std::all_of(monotone.begin(), monotone.end(), [](bool b) { return b; });
  for (const auto& t : tails) {
    if (t.gap()) rep.kappa_pairs.emplace_back(*t.gap(), *t.log_kappa1());
    double f1 = NAN, f2 = NAN;
    if (static_cast<int>(t.kappa.size()) >= L) {
      f1 = 0;
      for (std::size_t i = 0; i + static_cast<std::size_t>(L) <= t.kappa.size(); ++i)
        f1 = std::max(f1, static_cast<double>(t.kappa[i + static_cast<std::size_t>(L) - 1] - t.kappa[i]) /
                              static_cast<double>(t.kappa[i]));
    }
    for (std::size_t i = 1; i < t.kappa.size(); ++i) {
      double r = static_cast<double>(t.kappa[i]) / static_cast<double>(t.kappa[i - 1]);
      f2 = std::isnan(f2) ? r : std::min(f2, r);
    }
    rep.f1.push_back(f1);
    rep.f2.push_back(f2);
  }
  return rep;
}

}  // namespace rotcode
