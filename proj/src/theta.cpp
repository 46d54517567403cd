#include "rotcode/theta.hpp"

#include <atomic>
#include <mutex>
#include <sstream>
#include <vector>

namespace rotcode {

namespace {
std::atomic<long> g_precision_cap{65536};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

mpz_class parse_int(const std::string& s) {
  mpq_class q = parse_rational(s);
  if (q.get_den() != 1) throw ConstructionError("expected an integer, got '" + s + "'");
  return q.get_num();
}

bool is_root_of_unity(const ComplexRational& z, unsigned long max_order) {
  if (z.norm2() != 1) return false;
  ComplexRational p = z;
  for (unsigned long k = 1; k <= max_order; ++k) {
    if (p == ComplexRational(1)) return true;
    p = p * z;
  }
  return false;
}

BallReal argument(const ComplexRational& z, mpfr_prec_t prec) {
  if (z.im == 0) return z.re > 0 ? BallReal(prec) : BallReal::pi(prec);
  return atan2(BallReal::from_mpq(z.im, prec), BallReal::from_mpq(z.re, prec));
}

}  // namespace

long precision_cap() { return g_precision_cap.load(); }
void set_precision_cap(long bits) {
  if (bits < 64) throw InvalidArgument("precision cap must be at least 64 bits");
  g_precision_cap.store(bits);
}

struct ThetaOracle::Impl {
  Kind kind;
  std::string spec;
  std::function<BallReal(mpfr_prec_t)> compute;
  std::optional<QuotientFn> quotients;
  std::mutex mu;
  std::optional<BallReal> cache;
};

ThetaOracle ThetaOracle::quadratic(const mpz_class& a, const mpz_class& b, const mpz_class& c, bool plus_root) {
  if (a == 0) throw ConstructionError("quadratic spec needs a nonzero leading coefficient");
  mpz_class disc = b * b - 4 * a * c;
  if (disc <= 0) throw ConstructionError("quadratic spec has no two distinct real roots");
  if (mpz_perfect_square_p(disc.get_mpz_t()))
    throw ConstructionError("quadratic spec has a square discriminant, so its roots are rational");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Quadratic;
  impl->spec = "quad:" + a.get_str() + "," + b.get_str() + "," + c.get_str() + ":" + (plus_root ? "+" : "-");
  impl->compute = [a, b, disc, plus_root](mpfr_prec_t prec) {
    BallReal s = sqrt(BallReal::from_mpz(disc, prec));
    if (!plus_root) s = -s;
    return (s - BallReal::from_mpz(b, prec)) / BallReal::from_mpz(2 * a, prec);
  };
  return ThetaOracle(std::move(impl));
}

ThetaOracle ThetaOracle::golden() {
  ThetaOracle t = quadratic(1, 1, -1, true);
  t.impl_->spec = "golden";
  return t;
}

ThetaOracle ThetaOracle::sqrt_frac(const mpz_class& d) {
  if (d <= 0) throw ConstructionError("sqrt spec needs a positive integer");
  mpz_class k;
  mpz_sqrt(k.get_mpz_t(), d.get_mpz_t());
  // (x + k)^2 = d.
  ThetaOracle t = quadratic(1, 2 * k, k * k - d, true);
  t.impl_->spec = "sqrt:" + d.get_str();
  return t;
}

ThetaOracle ThetaOracle::decimal(const std::string& digits, bool exact) {
  mpq_class value = parse_rational(digits);
  if (exact) throw ConstructionError("decimal literal '" + digits + "' is certified exact, hence rational");
  auto dot = digits.find('.');
  long places = dot == std::string::npos ? 0 : static_cast<long>(digits.size() - dot - 1);
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(places));
  mpq_class rad(1, den);
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::DecimalLiteral;
  impl->spec = "dec:" + digits;
  impl->compute = [value, rad](mpfr_prec_t prec) { return BallReal::from_mpq(value, rad, prec); };
  return ThetaOracle(std::move(impl));
}

ThetaOracle ThetaOracle::log_ratio(const ComplexRational& z1, const ComplexRational& z2, const mpq_class& scale) {
  if (z1.is_zero() || z2.is_zero()) throw ConstructionError("log-ratio needs nonzero points");
  if (z2 == ComplexRational(1)) throw ConstructionError("log-ratio denominator log(1) vanishes");
  if (scale == 0) throw ConstructionError("log-ratio scale must be nonzero");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::LogRatio;
  impl->spec = "logratio:" + z1.re.get_str() + "," + z1.im.get_str() + "," + z2.re.get_str() + "," +
               z2.im.get_str();
  if (scale != 1) impl->spec += ":" + scale.get_str();
  const bool unit = z1.norm2() == 1 && z2.norm2() == 1;
  const bool positive = z1.is_real() && z2.is_real() && z1.re > 0 && z2.re > 0;
  if (unit) {
    if (is_root_of_unity(z1, 360) && is_root_of_unity(z2, 360))
      throw ConstructionError("log-ratio of two roots of unity is rational");
    impl->compute = [z1, z2, scale](mpfr_prec_t prec) {
      return BallReal::from_mpq(scale, prec) * argument(z1, prec) / argument(z2, prec);
    };
  } else if (positive) {
    if (z1 == ComplexRational(1)) throw ConstructionError("log-ratio numerator log(1) vanishes");
    impl->compute = [z1, z2, scale](mpfr_prec_t prec) {
      return BallReal::from_mpq(scale, prec) * log(BallReal::from_mpq(z1.re, prec)) /
             log(BallReal::from_mpq(z2.re, prec));
    };
  } else {
    throw ConstructionError("log-ratio supports two unit-circle points or two positive rationals");
  }
  return ThetaOracle(std::move(impl));
}

ThetaOracle ThetaOracle::from_quotients(QuotientFn quotients, std::string label) {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::QuotientList;
  impl->spec = std::move(label);
  impl->quotients = quotients;
  impl->compute = [quotients](mpfr_prec_t prec) {
    // The number lies between consecutive convergents.
    mpz_class p2 = 0, q2 = 1, p1 = 1, q1 = 0;
    mpz_class target;
    mpz_ui_pow_ui(target.get_mpz_t(), 2, static_cast<unsigned long>(prec) + 2);
    for (std::size_t m = 0;; ++m) {
      mpz_class a = quotients(m);
      if (m > 0 && a <= 0) throw ConstructionError("partial quotients beyond a_0 must be positive");
      mpz_class p = a * p1 + p2, q = a * q1 + q2;
      if (m > 0 && q * q1 > target) {
        mpq_class c0(p1, q1), c1(p, q);
        c0.canonicalize();
        c1.canonicalize();
        return BallReal::from_mpq((c0 + c1) / 2, (c1 - c0) / 2, prec);
      }
      p2 = p1, q2 = q1, p1 = p, q1 = q;
    }
  };
  return ThetaOracle(std::move(impl));
}

ThetaOracle ThetaOracle::reciprocal(const ThetaOracle& x) {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Reciprocal;
  impl->spec = "recip(" + x.spec() + ")";
  impl->compute = [x](mpfr_prec_t prec) {
    BallReal v = x.refine(prec);
    return BallReal::from_int(1, prec) / v;
  };
  return ThetaOracle(std::move(impl));
}

ThetaOracle ThetaOracle::parse(const std::string& spec) {
  auto colon = spec.find(':');
  std::string head = spec.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  try {
    if (head == "golden" && rest.empty()) return golden();
    if (head == "sqrt") return sqrt_frac(parse_int(rest));
    if (head == "quad") {
      auto parts = split(rest, ':');
      if (parts.size() != 2) throw ConstructionError("quad spec is quad:a,b,c:+|-");
      auto coef = split(parts[0], ',');
      if (coef.size() != 3 || (parts[1] != "+" && parts[1] != "-"))
        throw ConstructionError("quad spec is quad:a,b,c:+|-");
      return quadratic(parse_int(coef[0]), parse_int(coef[1]), parse_int(coef[2]), parts[1] == "+");
    }
    if (head == "dec") {
      auto parts = split(rest, ':');
      if (parts.empty() || parts.size() > 2 || (parts.size() == 2 && parts[1] != "exact"))
        throw ConstructionError("dec spec is dec:<digits>[:exact]");
      return decimal(parts[0], parts.size() == 2);
    }
    if (head == "logratio") {
      auto parts = split(rest, ':');
      auto v = split(parts.at(0), ',');
      if (v.size() != 4) throw ConstructionError("logratio spec is logratio:re1,im1,re2,im2[:scale]");
      mpq_class scale = parts.size() > 1 ? parse_rational(parts[1]) : mpq_class(1);
      return log_ratio(ComplexRational(parse_rational(v[0]), parse_rational(v[1])),
                       ComplexRational(parse_rational(v[2]), parse_rational(v[3])), scale);
    }
    if (head == "cfgen") {
      auto parts = split(rest, ':');
      if (parts.size() == 2 && parts[0] == "affine") {
        auto ab = split(parts[1], ',');
        if (ab.size() != 2) throw ConstructionError("cfgen:affine:A,B");
        mpz_class a = parse_int(ab[0]), b = parse_int(ab[1]);
        if (a + b <= 0 || b < 0) throw ConstructionError("cfgen:affine needs positive quotients");
        return from_quotients([a, b](std::size_t m) { return m == 0 ? mpz_class(0) : mpz_class(a + b * m); },
                              spec);
      }
      if (parts.size() == 2 && parts[0] == "pow") {
        mpz_class b = parse_int(parts[1]);
        if (b < 2) throw ConstructionError("cfgen:pow:B needs B >= 2");
        return from_quotients(
            [b](std::size_t m) {
              if (m == 0) return mpz_class(0);
              mpz_class r;
              mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), m);
              return r;
            },
            spec);
      }
      throw ConstructionError("cfgen spec is cfgen:affine:A,B or cfgen:pow:B");
    }
  } catch (const InvalidArgument& e) {
    throw ConstructionError("bad theta spec '" + spec + "': " + e.what());
  }
  throw ConstructionError("unknown theta spec '" + spec + "'");
}

BallReal ThetaOracle::refine(long bits) const {
  if (bits < 16) throw InvalidArgument("refine needs at least 16 bits");
  {
    std::lock_guard<std::mutex> lock(impl_->mu);
    if (impl_->cache && impl_->cache->radius_le_pow2(1 - bits)) return *impl_->cache;
  }
  const long cap = precision_cap() + 64;
  for (long prec = bits + 32; prec <= 4 * cap; prec *= 2) {
    BallReal b = impl_->compute(static_cast<mpfr_prec_t>(prec));
    if (b.radius_le_pow2(1 - bits)) {
      std::lock_guard<std::mutex> lock(impl_->mu);
      if (!impl_->cache || impl_->cache->prec() < b.prec()) impl_->cache = b;
      return b;
    }
  }
  throw PrecisionExhausted("oracle " + impl_->spec + " cannot reach " + std::to_string(bits) + " bits");
}

BallReal ThetaOracle::refine_frac(long bits) const {
  return escalate(
      bits,
      [&](long b) -> std::optional<BallReal> {
        auto f = refine(b).frac();
        if (f && f->radius_le_pow2(1 - bits)) return f;
        return std::nullopt;
      },
      "fractional part of " + impl_->spec);
}

ThetaOracle::Kind ThetaOracle::kind() const { return impl_->kind; }
const std::string& ThetaOracle::spec() const { return impl_->spec; }
const QuotientFn* ThetaOracle::quotients() const { return impl_->quotients ? &*impl_->quotients : nullptr; }

}  // namespace rotcode
