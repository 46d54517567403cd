#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "rotcode/ball.hpp"
#include "rotcode/complex.hpp"
#include "rotcode/error.hpp"
#include "rotcode/theta.hpp"

using namespace rotcode;

namespace {

bool ball_contains(const BallReal& b, const oracle::Hp& x) {
  return mpfr_lessequal_p(b.lower().get(), x.v) && mpfr_lessequal_p(x.v, b.upper().get());
}

BallReal ball(double mid, double rad) {
  return BallReal::from_mpq(mpq_class(mid), mpq_class(rad), 64);
}

// Random expression over rational leaves, evaluated either as balls or in
// plain MPFR.
struct Expr {
  int op;
  mpq_class leaf;
  std::vector<Expr> kids;
};

Expr random_expr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, 9);
  if (depth == 0 || pick(rng) < 2) {
    std::uniform_int_distribution<long> num(-2000, 2000), den(1, 997);
    return {-1, mpq_class(num(rng), den(rng)), {}};
  }
  int op = pick(rng);
  Expr e{op, 0, {}};
  int arity = op < 4 ? 2 : 1;
  for (int i = 0; i < arity; ++i) e.kids.push_back(random_expr(rng, depth - 1));
  return e;
}

BallReal eval_ball(const Expr& e, mpfr_prec_t p) {
  if (e.op < 0) {
    mpq_class q = e.leaf;
    q.canonicalize();
    return BallReal::from_mpq(q, p);
  }
  BallReal a = eval_ball(e.kids[0], p);
  switch (e.op) {
    case 0: return a + eval_ball(e.kids[1], p);
    case 1: return a - eval_ball(e.kids[1], p);
    case 2: return a * eval_ball(e.kids[1], p);
    case 3: return a / eval_ball(e.kids[1], p);
    case 4: return sin(a);
    case 5: return cos(a);
    case 6: return abs(a);
    case 7: return sqrt(abs(a));
    case 8: return log(abs(a));
    default: {
      if (mpfr_cmp_si(a.upper().get(), 40) > 0) throw Error("overflow guard");
      return exp(a);
    }
  }
}

oracle::Hp eval_hp(const Expr& e, mpfr_prec_t p) {
  oracle::Hp r(p);
  if (e.op < 0) {
    mpq_class q = e.leaf;
    q.canonicalize();
    mpfr_set_q(r.v, q.get_mpq_t(), MPFR_RNDN);
    return r;
  }
  oracle::Hp a = eval_hp(e.kids[0], p);
  oracle::Hp b(p);
  if (e.kids.size() > 1) b = eval_hp(e.kids[1], p);
  switch (e.op) {
    case 0: mpfr_add(r.v, a.v, b.v, MPFR_RNDN); break;
    case 1: mpfr_sub(r.v, a.v, b.v, MPFR_RNDN); break;
    case 2: mpfr_mul(r.v, a.v, b.v, MPFR_RNDN); break;
    case 3: mpfr_div(r.v, a.v, b.v, MPFR_RNDN); break;
    case 4: mpfr_sin(r.v, a.v, MPFR_RNDN); break;
    case 5: mpfr_cos(r.v, a.v, MPFR_RNDN); break;
    case 6: mpfr_abs(r.v, a.v, MPFR_RNDN); break;
    case 7: mpfr_abs(r.v, a.v, MPFR_RNDN); mpfr_sqrt(r.v, r.v, MPFR_RNDN); break;
    case 8: mpfr_abs(r.v, a.v, MPFR_RNDN); mpfr_log(r.v, r.v, MPFR_RNDN); break;
    default: mpfr_exp(r.v, a.v, MPFR_RNDN); break;
  }
  return r;
}

}  // namespace

TEST_CASE("golden oracle at 64 bits against a rational Newton bracket") {
  BallReal g = ThetaOracle::golden().refine(64);
  CHECK(g.radius_le_pow2(-63));
  // Newton on x^2 + x - 1 in exact rationals, then a certified bracket.
  mpq_class x(3, 5);
  for (int i = 0; i < 8; ++i) {
    x = x - (x * x + x - 1) / (2 * x + 1);
    x.canonicalize();
  }
  mpq_class eps(1, mpz_class(1) << 200);
  mpq_class lo = x - eps, hi = x + eps;
  REQUIRE(lo * lo + lo - 1 < 0);
  REQUIRE(hi * hi + hi - 1 > 0);
  Mpfr l(512), h(512);
  mpfr_set_q(l.get(), lo.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(h.get(), hi.get_mpq_t(), MPFR_RNDU);
  CHECK(mpfr_lessequal_p(g.lower().get(), l.get()));
  CHECK(mpfr_lessequal_p(h.get(), g.upper().get()));
  CHECK(g.mid_double() == doctest::Approx(0.6180339887).epsilon(1e-10));
}

TEST_CASE("decimal literal oracle") {
  CHECK_THROWS_AS(ThetaOracle::parse("dec:0.5000:exact"), ConstructionError);
  ThetaOracle t = ThetaOracle::parse("dec:0.50000");
  CHECK(t.kind() == ThetaOracle::Kind::DecimalLiteral);
  BallReal b = t.refine(16);
  CHECK(b.mid_double() == 0.5);
  CHECK_THROWS_AS(t.refine(40), PrecisionExhausted);
}

TEST_CASE("log-ratio oracle for (3+4i)/5 over -1") {
  ThetaOracle t = ThetaOracle::parse("logratio:3/5,4/5,-1,0");
  BallReal b = t.refine(256);
  CHECK(ball_contains(b, oracle::acos_over_pi(3, 5)));
  CHECK(b.mid_double() == doctest::Approx(0.2951672353).epsilon(1e-10));
  CHECK_THROWS_AS(ThetaOracle::log_ratio(ComplexRational(mpq_class(3, 5), mpq_class(4, 5)), ComplexRational(1)),
                  ConstructionError);
  CHECK_THROWS_AS(ThetaOracle::log_ratio(ComplexRational(1), ComplexRational(0)), ConstructionError);
  CHECK_THROWS_AS(ThetaOracle::parse("logratio:0,1,-1,0"), ConstructionError);
}

TEST_CASE("quadratic oracle rejects square discriminants") {
  CHECK_THROWS_AS(ThetaOracle::quadratic(1, 0, -4, true), ConstructionError);
  CHECK_THROWS_AS(ThetaOracle::parse("sqrt:9"), ConstructionError);
  CHECK_THROWS_AS(ThetaOracle::parse("nonsense"), ConstructionError);
  BallReal s = ThetaOracle::parse("sqrt:2").refine(100);
  CHECK(s.mid_double() == doctest::Approx(std::sqrt(2.0) - 1));
  CHECK_THROWS_AS(ThetaOracle::golden().refine(8), InvalidArgument);
}

TEST_CASE("refinements are nested around one number") {
  for (const char* spec : {"golden", "sqrt:7", "quad:3,-5,1:-", "logratio:3/5,4/5,-1,0", "cfgen:affine:1,1"}) {
    ThetaOracle t = ThetaOracle::parse(spec);
    BallReal prev = t.refine(32);
    for (long bits = 64; bits <= 2048; bits *= 2) {
      BallReal cur = t.refine(bits);
      CHECK(cur.radius_le_pow2(1 - bits));
      CHECK(cur.overlaps(prev));
      prev = cur;
    }
  }
}

TEST_CASE("certified_compare") {
  CHECK(certified_compare(ball(0.1, 0.01), ball(0.5, 0.01)) == Ordering3::Less);
  CHECK(certified_compare(ball(0.5, 0.01), ball(0.1, 0.01)) == Ordering3::Greater);
  CHECK(certified_compare(ball(0.3, 0.2), ball(0.4, 0.2)) == Ordering3::Undecided);
  ThetaOracle g = ThetaOracle::golden();
  BallReal theta = g.refine(256);
  BallReal f3 = *(theta * 3L).frac();
  BallReal r1 = BallReal::from_int(1, 256) - theta;
  CHECK(certified_compare(f3, r1) == Ordering3::Greater);
}

TEST_CASE("floor and frac") {
  CHECK(*ball(2.5, 0.25).floor() == 2);
  CHECK(*ball(-0.5, 0.25).floor() == -1);
  CHECK_FALSE(ball(3.0, 0.01).floor());
  CHECK_FALSE(ball(2.99, 0.02).frac());
  BallReal x = ball(7.25, 1e-6);
  BallReal f = *x.frac();
  CHECK((f + BallReal::from_mpz(*x.floor(), 64)).overlaps(x));
  CHECK(f.mid_double() == 0.25);
}

TEST_CASE("parse_rational") {
  CHECK(parse_rational("0.25") == mpq_class(1, 4));
  CHECK(parse_rational("-3/6") == mpq_class(-1, 2));
  CHECK(parse_rational("12") == 12);
  CHECK_THROWS_AS(parse_rational("1/0"), InvalidArgument);
  CHECK_THROWS_AS(parse_rational("abc"), InvalidArgument);
  CHECK(parse_complex_rational("3/5,4/5") == ComplexRational(mpq_class(3, 5), mpq_class(4, 5)));
}

TEST_CASE("escalation hits the cap") {
  long old = precision_cap();
  set_precision_cap(256);
  int calls = 0;
  CHECK_THROWS_AS(escalate(64, [&](long) -> std::optional<int> { ++calls; return std::nullopt; }, "never"),
                  PrecisionExhausted);
  CHECK(calls == 3);
  set_precision_cap(old);
  CHECK(escalate(64, [](long b) -> std::optional<long> { if (b >= 512) return b; return std::nullopt; }, "x") == 512);
}

TEST_CASE("complex balls") {
  ComplexRational z(mpq_class(3, 5), mpq_class(4, 5));
  BallComplex b = BallComplex::from(z, 256);
  CHECK(b.abs().overlaps(BallReal::from_int(1, 256)));
  BallComplex p = pow(b, 7);
  ComplexRational zp = pow(z, 7);
  BallComplex e = BallComplex::from(zp, 256);
  CHECK(p.overlaps(e));
  BallComplex q = p / b;
  CHECK(q.overlaps(BallComplex::from(pow(z, 6), 256)));
  CHECK((b * inverse(b)).overlaps(BallComplex::from(ComplexRational(1), 256)));
  CHECK(z.conj() * z == ComplexRational(1));
}

TEST_CASE("random expressions: containment across precisions") {
  std::mt19937_64 rng(20240611);
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    Expr e = random_expr(rng, 5);
    try {
      BallReal lo = eval_ball(e, 80);
      BallReal hi = eval_ball(e, 320);
      oracle::Hp ref = eval_hp(e, 4096);
      CHECK(lo.inflate(lo.rad()).contains(hi));
      CHECK(ball_contains(lo, ref));
      CHECK(ball_contains(hi, ref));
      ++checked;
    } catch (const Error&) {
    }
  }
  CHECK(checked > 200);
}
