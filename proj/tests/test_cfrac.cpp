#include "doctest.h"
#include "oracles.hpp"
#include "rotcode/cfrac.hpp"
#include "rotcode/error.hpp"

using namespace rotcode;

namespace {

std::vector<long> as_longs(const std::vector<mpz_class>& v) {
  std::vector<long> out;
  for (const auto& x : v) out.push_back(x.get_si());
  return out;
}

// ||M theta|| from a fixed enclosure of theta.
BallReal dist(const BallReal& theta, long M) {
  BallReal f = *(theta * M).frac();
  BallReal g = BallReal::from_int(1, f.prec()) - f;
  return certified_compare(f, g) == Ordering3::Less ? f : g;
}

}  // namespace

TEST_CASE("quotients of quadratic surds match the integer recurrence") {
  // golden = (-1 + sqrt 5) / 2, sqrt 2 - 1 = (-1 + sqrt 2) / 1, sqrt 7 - 2.
  CHECK(as_longs(expand(ThetaOracle::golden(), 8).quotients) == oracle::surd_quotients(-1, 5, 2, 9));
  CHECK(as_longs(expand(ThetaOracle::golden(), 8).quotients) == std::vector<long>{0, 1, 1, 1, 1, 1, 1, 1, 1});
  CHECK(as_longs(expand(ThetaOracle::parse("sqrt:2"), 5).quotients) == std::vector<long>{0, 2, 2, 2, 2, 2});
  CHECK(as_longs(expand(ThetaOracle::parse("sqrt:7"), 40).quotients) == oracle::surd_quotients(-2, 7, 1, 41));
  CHECK(as_longs(expand(ThetaOracle::parse("sqrt:31"), 40).quotients) == oracle::surd_quotients(-5, 31, 1, 41));
  CHECK_THROWS_AS(expand(ThetaOracle::golden(), 0), InvalidArgument);
}

TEST_CASE("rule-built numbers expand to their own rule") {
  ContinuedFraction cf = expand(ThetaOracle::parse("cfgen:affine:1,1"), 12);
  for (int m = 1; m <= 12; ++m) CHECK(cf.quotients[m] == m + 1);
  // Ball expansion of the same number agrees.
  ThetaOracle opaque = ThetaOracle::decimal(ThetaOracle::parse("cfgen:affine:1,1").refine(400).mid_decimal(110));
  ContinuedFraction cf2 = expand(opaque, 12);
  CHECK(cf2.quotients == cf.quotients);
  CHECK(cf.tails.size() == 12);
  CHECK(cf.tails[3].mid_double() == doctest::Approx(cf2.tails[3].mid_double()));
}

TEST_CASE("convergents") {
  ContinuedFraction g = expand(ThetaOracle::golden(), 6);
  std::vector<std::pair<mpz_class, mpz_class>> want{{0, 1}, {1, 1}, {1, 2}, {2, 3}, {3, 5}, {5, 8}, {8, 13}};
  CHECK(convergents(g) == want);
  ContinuedFraction s = expand(ThetaOracle::parse("sqrt:2"), 3);
  std::vector<std::pair<mpz_class, mpz_class>> want2{{0, 1}, {1, 2}, {2, 5}, {5, 12}};
  CHECK(convergents(s) == want2);
  ContinuedFraction one = ContinuedFraction::from_quotients({mpz_class(4)});
  CHECK(convergents(one) == std::vector<std::pair<mpz_class, mpz_class>>{{4, 1}});
}

TEST_CASE("determinant, gcd and tail recursion") {
  for (const char* spec : {"golden", "sqrt:2", "sqrt:13", "logratio:3/5,4/5,-1,0", "cfgen:pow:2"}) {
    ContinuedFraction cf = expand(ThetaOracle::parse(spec), 20);
    for (int m = 1; m <= cf.depth(); ++m) {
      mpz_class det = cf.p_at(m) * cf.q_at(m - 1) - cf.p_at(m - 1) * cf.q_at(m);
      CHECK(det == (m % 2 == 1 ? 1 : -1));
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), cf.p[m].get_mpz_t(), cf.q[m].get_mpz_t());
      CHECK(g == 1);
    }
    for (int m = 1; m + 1 < static_cast<int>(cf.tails.size()); ++m) {
      // x_m = a_m + 1 / x_{m+1}.
      const BallReal& xm = cf.tails[m - 1];
      const BallReal& xn = cf.tails[m];
      BallReal rhs = BallReal::from_mpz(cf.quotients[m], xn.prec()) + BallReal::from_int(1, xn.prec()) / xn;
      CHECK(xm.overlaps(rhs));
    }
  }
}

TEST_CASE("signed error") {
  ThetaOracle g = ThetaOracle::golden();
  ContinuedFraction cf = expand(g, 10);
  BallReal e4 = signed_error(cf, 4, g);
  CHECK(e4.mid_double() == doctest::Approx(5 * ((std::sqrt(5.0) - 1) / 2) - 3));
  CHECK(e4.mid_double() == doctest::Approx(0.0901699).epsilon(1e-6));
  BallReal e5 = signed_error(cf, 5, g);
  CHECK(e5.mid_double() == doctest::Approx(-0.0557281).epsilon(1e-6));
  for (int m = 0; m + 1 < cf.depth(); ++m) {
    BallReal a = signed_error(cf, m, g), b = signed_error(cf, m + 1, g);
    CHECK(mpfr_sgn(a.mid().get()) * mpfr_sgn(b.mid().get()) < 0);
    // |q_m theta - p_m| < 1 / q_{m+1}.
    BallReal bound = BallReal::from_int(1, 128) / BallReal::from_mpz(cf.q[m + 1], 128);
    CHECK(certified_compare(abs(a), bound) == Ordering3::Less);
  }
  CHECK_THROWS_AS(signed_error(cf, 10, g), InvalidArgument);
}

TEST_CASE("nearest distance and best approximation") {
  ThetaOracle g = ThetaOracle::golden();
  BallReal d8 = nearest_distance(8, g);
  CHECK(d8.mid_double() == doctest::Approx(0.0557281).epsilon(1e-6));
  for (long M = 1; M < 13; ++M)
    if (M != 8) CHECK(certified_compare(nearest_distance(M, g), d8) == Ordering3::Greater);
  ContinuedFraction cf = expand(g, 10);
  for (int m = 1; m < 9; ++m) CHECK(nearest_distance(cf.q[m], g).overlaps(abs(signed_error(cf, m, g))));
  CHECK_THROWS_AS(nearest_distance(0, g), InvalidArgument);
}

TEST_CASE("best approximation property, exhaustive to 10^4") {
  for (const char* spec : {"golden", "sqrt:2", "sqrt:19"}) {
    ThetaOracle t = ThetaOracle::parse(spec);
    ContinuedFraction cf = expand_until_denominator(t, 10000);
    BallReal theta = t.refine(256);
    std::vector<BallReal> d;
    d.reserve(10001);
    d.push_back(BallReal(256));
    for (long M = 1; M <= 10000; ++M) d.push_back(dist(theta, M));
    for (int N = 1; N + 1 <= cf.depth(); ++N) {
      if (cf.q[N + 1] > 10000) break;
      const long qn = cf.q[N].get_si(), qn1 = cf.q[N + 1].get_si();
      for (long M = 1; M < qn1; ++M) {
        if (M == qn) continue;
        CHECK(certified_compare(d[M], d[qn]) == Ordering3::Greater);
      }
    }
  }
}

TEST_CASE("opaque literal too short to certify") {
  CHECK_THROWS_AS(expand(ThetaOracle::parse("dec:0.6180339887"), 30), PrecisionExhausted);
}
