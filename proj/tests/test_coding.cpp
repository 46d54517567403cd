#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "rotcode/cfrac.hpp"
#include "rotcode/coding.hpp"
#include "rotcode/error.hpp"

using namespace rotcode;

namespace {

CodingWord word(const std::string& theta, const std::string& bounds) {
  return CodingWord(PartitionSpec::parse(ThetaOracle::parse(theta), bounds));
}

// Letter by plain MPFR comparisons, boundaries given as doubles-free closures.
int ref_letter(const oracle::Hp& t, std::uint64_t n, const std::vector<oracle::Hp>& cuts) {
  oracle::Hp x(mpfr_get_prec(t.v));
  mpfr_mul_ui(x.v, t.v, n, MPFR_RNDN);
  mpfr_frac(x.v, x.v, MPFR_RNDN);
  int k = 0;
  for (const auto& c : cuts) k += mpfr_cmp(x.v, c.v) >= 0;
  return k;
}

}  // namespace

TEST_CASE("letters of the golden Sturmian coding") {
  CodingWord w = word("golden", "1-theta");
  CHECK(w.alphabet_size() == 2);
  CHECK(letter_at(w, 0) == 0);
  CHECK(letter_at(w, 1) == 1);
  CHECK(letter_at(w, 2) == 0);
  CHECK(delta_vector(w, 1) == std::vector<int>{0, 1});
  CodingWord q = word("golden", "1/4,3/4");
  CHECK(letter_at(q, 0) == 0);
  CHECK(delta_vector(q, 0) == std::vector<int>{1, 0, 0});
  CHECK(delta_vector(q, 17).size() == 3);
}

TEST_CASE("letters agree with a plain high-precision orbit") {
  oracle::Hp t = oracle::golden(4096);
  std::vector<oracle::Hp> cuts(2, oracle::Hp(4096));
  mpfr_set_d(cuts[0].v, 0.25, MPFR_RNDN);
  mpfr_set_d(cuts[1].v, 0.75, MPFR_RNDN);
  CodingWord w = word("golden", "1/4,3/4");
  std::vector<int> bulk = w.letters(0, 5000, 4);
  for (std::uint64_t n = 0; n < 5000; ++n) REQUIRE(bulk[n] == ref_letter(t, n, cuts));
  std::mt19937_64 rng(7);
  for (int k = 0; k < 2000; ++k) {
    std::uint64_t n = rng() >> 20;
    CHECK(w.letter(n) == ref_letter(t, n, cuts));
  }
}

TEST_CASE("slow path is exercised near boundaries") {
  // n = 55 puts frac(n theta) within 1/89 of 1 - theta's neighbourhood.
  CodingWord w = word("golden", "1-theta");
  oracle::Hp t = oracle::golden(4096);
  std::vector<oracle::Hp> cuts(1, oracle::Hp(4096));
  mpfr_ui_sub(cuts[0].v, 1, t.v, MPFR_RNDN);
  for (std::uint64_t n : {1ull, 2ull, 55ull, 89ull, 832040ull, 1346269ull, 2971215073ull})
    CHECK(w.letter(n) == ref_letter(t, n, cuts));
}

TEST_CASE("cosine coding follows the sign of cos") {
  ThetaOracle theta1 = ThetaOracle::parse("logratio:3/5,4/5,-1,0:1/2");
  CodingWord w(PartitionSpec::parse(theta1, "1/4,3/4"));
  ComplexRational z(mpq_class(3, 5), mpq_class(4, 5)), p(1);
  for (std::uint64_t n = 0; n < 300; ++n) {
    int a = w.letter(n);
    CHECK((a == 0 || a == 2) == (p.re > 0));
    p = p * z;
  }
}

TEST_CASE("partition parsing and validation") {
  ThetaOracle g = ThetaOracle::golden();
  PartitionSpec p = PartitionSpec::parse(g, "0.2+theta, 1/5");
  REQUIRE(p.size() == 2);
  CHECK(p.boundaries()[0].c0 == mpq_class(1, 5));
  CHECK(p.boundaries()[1].c1 == 1);
  CHECK(p.r(2, 64).mid_double() == doctest::Approx(0.2 + 0.6180339887));
  CHECK(p.eta().mid_double() == doctest::Approx(0.1819660113));
  // theta > 1 is reduced: 1 + golden has t = golden.
  PartitionSpec q = PartitionSpec::parse(ThetaOracle::quadratic(1, -1, -1, true), "2-theta");
  CHECK(q.shift() == 1);
  CHECK(q.r(1, 64).mid_double() == doctest::Approx(0.381966011));
  CHECK_THROWS_AS(PartitionSpec::parse(g, "1/2,0.5"), ConstructionError);
  CHECK_THROWS_AS(PartitionSpec::parse(g, "1"), ConstructionError);
  CHECK_THROWS_AS(PartitionSpec::parse(g, ""), ConstructionError);
  CHECK_THROWS_AS(PartitionSpec::parse(g, "~1.00"), ConstructionError);
  CHECK_THROWS_AS(PartitionSpec::parse(g, "abc"), ConstructionError);
  PartitionSpec w = PartitionSpec::parse(g, "1/4,3/4");
  CHECK_THROWS_AS(w.with_weights_T({1, 1, 0}), ConstructionError);
  CHECK_THROWS_AS(w.with_weights_T({1, 0}), ConstructionError);
  CHECK_THROWS_AS(w.with_weights_S({0, 0}), ConstructionError);
  CHECK_NOTHROW(w.with_weights_T({1, 0, 1}));
  // theta lands on a boundary at n = 2.
  CHECK_THROWS_AS(word("golden", "2*theta-1"), BoundaryHit);
  CHECK_NOTHROW(word("golden", "1-theta"));
}

TEST_CASE("condition (4)") {
  ThetaOracle g = ThetaOracle::golden();
  ConditionCReport r1 = check_condition_C(PartitionSpec::parse(g, "1/4,3/4"), 1000);
  CHECK_FALSE(r1.violation);
  CHECK(r1.exact);
  REQUIRE(r1.min_residual);
  CHECK(mpfr_sgn(r1.min_residual->lower().get()) > 0);
  ConditionCReport r2 = check_condition_C(PartitionSpec::parse(g, "0.2,0.2+theta"), 10);
  REQUIRE(r2.violation);
  CHECK(r2.violation->i == 1);
  CHECK(r2.violation->j == 2);
  CHECK(r2.violation->v == 1);
  CHECK(r2.violation->u == 0);
  ConditionCReport r3 = check_condition_C(PartitionSpec::parse(g, "1-theta"), 100);
  CHECK_FALSE(r3.violation);
  REQUIRE(r3.lattice_points.size() == 1);
  CHECK(r3.lattice_points[0].v == -1);
  CHECK_THROWS_AS(check_condition_C(PartitionSpec::parse(g, "1/3"), 0), InvalidArgument);
  // Opaque boundaries: fine when far from the lattice, inconclusive when not.
  ConditionCReport r4 = check_condition_C(PartitionSpec::parse(g, "~0.3000,~0.7000"), 5);
  CHECK_FALSE(r4.exact);
  CHECK_THROWS_AS(check_condition_C(PartitionSpec::parse(g, "~0.2,~0.818"), 5), Inconclusive);
}

TEST_CASE("boundary reduction") {
  ThetaOracle g = ThetaOracle::golden();
  PartitionSpec p = PartitionSpec::parse(g, "0.2,0.2+theta");
  ConditionCReport rep = check_condition_C(p, 10);
  REQUIRE(rep.violation);
  BoundaryReduction red = reduce_boundary(p, *rep.violation, 10);
  CHECK(red.removed == 2);
  CHECK(red.kept == 1);
  CHECK(red.v == 1);
  CHECK(red.plus_one);
  CHECK(red.prefix == std::vector<std::uint64_t>{0});
  CHECK(red.reduced.size() == 1);
  CHECK(red.extra.c0 == 1);
  CHECK(red.extra.c1 == -1);
  CHECK_FALSE(check_condition_C(red.reduced, 1000).violation);
  // Swapped orientation: r_1 - r_2 = -t.
  LatticeRelation back{2, 1, -1, 0};
  BoundaryReduction swapped = reduce_boundary(p, back, 10);
  CHECK(swapped.removed == 2);
  CHECK(swapped.v == 1);
  LatticeRelation wrong{1, 2, 1, 1};
  CHECK_THROWS_AS(reduce_boundary(p, wrong, 10), InvalidArgument);
  LatticeRelation zero{1, 2, 0, 0};
  CHECK_THROWS_AS(reduce_boundary(p, zero, 10), InvalidArgument);
  CHECK_THROWS_AS(reduce_boundary(p, *rep.violation, 0), InvalidArgument);
  // The letter identity itself, for n up to 2000.
  CodingWord wj(PartitionSpec(g, {p.boundaries()[1]}));
  CodingWord wi(PartitionSpec(g, {p.boundaries()[0]}));
  CodingWord wc(PartitionSpec(g, {red.extra}));
  for (std::uint64_t n = red.v; n < 2000; ++n) {
    const std::uint64_t m = n - red.v;
    int lhs = wj.letter(n) == 0;
    int rhs = (wi.letter(m) == 0) + (red.plus_one ? 1 : 0) - (wc.letter(m) == 0);
    REQUIRE(lhs == rhs);
  }
}

TEST_CASE("subword complexity") {
  auto p = subword_complexity(word("golden", "1-theta"), 20);
  for (int n = 1; n <= 20; ++n) CHECK(p[n - 1] == static_cast<std::uint64_t>(n + 1));
  std::vector<int> periodic;
  for (int k = 0; k < 400; ++k) periodic.push_back(k % 2);
  auto pp = subword_complexity(periodic, 5);
  CHECK(pp[1] == 2);
  auto pq = subword_complexity(word("golden", "1/4,3/4"), 30);
  const auto slope = pq[10] - pq[9];
  for (int n = 10; n < 30; ++n) CHECK(pq[n] - pq[n - 1] == slope);
  CHECK(slope == 3);
}

TEST_CASE("partition of unity and orbit additivity") {
  ThetaOracle g = ThetaOracle::golden();
  for (const char* bounds : {"1-theta", "1/4,3/4", "1/7,1/2,5/6"}) {
    PartitionSpec part = PartitionSpec::parse(g, bounds);
    CodingWord w(part);
    ContinuedFraction cf = expand_until_denominator(g, 1000);
    oracle::Hp t = oracle::golden(2048);
    std::vector<double> rs{0.0};
    for (int i = 1; i <= part.size(); ++i) rs.push_back(part.r(i, 64).mid_double());
    std::vector<int> a = w.letters(0, 3000);
    for (std::uint64_t n = 0; n < 50; ++n) {
      auto d = delta_vector(w, n);
      int sum = 0;
      for (int x : d) sum += x;
      CHECK(sum == 1);
    }
    for (int N = 2; N <= cf.depth() && cf.q[N] <= 1000; ++N) {
      const long q = cf.q[N].get_si();
      const double dq = nearest_distance(cf.q[N], g).mid_double();
      for (long n = 0; n + q < 3000; ++n) {
        if (a[n] == a[n + q]) continue;
        double best = 1;
        for (double r : rs) {
          double x = std::fmod(n * t.d() - r, 1.0);
          if (x < 0) x += 1;
          best = std::min(best, std::min(x, 1 - x));
        }
        CHECK(best <= dq * (1 + 1e-9));
      }
    }
  }
}
