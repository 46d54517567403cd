#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rotcode/ball.hpp"
#include "rotcode/complex.hpp"
#include "rotcode/theta.hpp"

namespace rotcode {

/// One cut point of the unit interval. A tagged boundary is exactly
/// c0 + c1 * t, where t = frac(theta); an opaque one is only known to lie in
/// [mid - rad, mid + rad].
struct Boundary {
  std::string text;
  bool tagged = false;
  mpq_class c0{0};
  mpq_class c1{0};
  mpq_class mid{0};
  mpq_class rad{0};

  static Boundary exact(mpq_class c0, mpq_class c1, std::string text = "");
  static Boundary opaque(mpq_class mid, mpq_class rad, std::string text = "");

  /// Ball of the boundary given a ball of t.
  BallReal ball(const BallReal& t) const;
  /// Canonical text: "1/4", "1-theta", "~0.3183".
  std::string describe() const;
};

/// Boundaries 0 < r_1 < ... < r_l < 1 of a rotation coding, optionally with
/// digit values u_0..u_l (for T) or v_1..v_l (for S).
class PartitionSpec {
 public:
  /// Sorts and validates. Tagged boundaries are reduced mod 1 first.
  PartitionSpec(ThetaOracle theta, std::vector<Boundary> boundaries);

  /// Comma separated boundaries. Each is a rational ("1/4", "0.25"), an
  /// affine expression in theta ("1-theta", "0.2+theta", "2*theta-1/3"),
  /// or an opaque decimal "~0.318309886". Terms in theta refer to the raw
  /// oracle value; everything is reduced mod 1.
  static PartitionSpec parse(const ThetaOracle& theta, const std::string& bounds);

  PartitionSpec& with_weights_T(std::vector<ComplexRational> u);
  PartitionSpec& with_weights_S(std::vector<ComplexRational> v);

  const ThetaOracle& theta() const { return theta_; }
  /// floor(theta); the coding uses t = theta - shift.
  const mpz_class& shift() const { return shift_; }
  /// Number of boundaries l.
  int size() const { return static_cast<int>(boundaries_.size()); }
  /// r_1..r_l, 0-based storage.
  const std::vector<Boundary>& boundaries() const { return boundaries_; }
  /// r_i for 0 <= i <= l + 1, with r_0 = 0 and r_{l+1} = 1.
  BallReal r(int i, long bits) const;
  /// Ball of t = frac(theta) with radius <= 2^(1 - bits).
  BallReal t(long bits) const;
  /// min_i (r_{i+1} - r_i).
  BallReal eta(long bits = 128) const;
  const std::optional<std::vector<ComplexRational>>& weights_T() const { return u_; }
  const std::optional<std::vector<ComplexRational>>& weights_S() const { return v_; }
  /// Copy without boundary index `k` (0-based) and without weights.
  PartitionSpec without(int k) const;
  std::string describe() const;

 private:
  ThetaOracle theta_;
  mpz_class shift_;
  std::vector<Boundary> boundaries_;
  std::optional<std::vector<ComplexRational>> u_;
  std::optional<std::vector<ComplexRational>> v_;
};

/// The coding a_n = i iff frac(n theta) lies in [r_i, r_{i+1}).
class CodingWord {
 public:
  /// Throws BoundaryHit when a tagged boundary equals frac(n theta) for
  /// some n >= 1.
  explicit CodingWord(PartitionSpec partition);

  const PartitionSpec& partition() const { return partition_; }
  int alphabet_size() const { return partition_.size() + 1; }

  int letter(std::uint64_t n) const;
  /// Letters for begin <= n < end, split over `jobs` threads.
  std::vector<int> letters(std::uint64_t begin, std::uint64_t end, int jobs = 1) const;
  /// Ball of frac(n t) with absolute radius <= 2^(1 - bits).
  BallReal orbit_point(std::uint64_t n, long bits) const;
  /// Letter from the 128-bit fixed-point orbit when it is certified there.
  std::optional<int> fast_letter(std::uint64_t n) const;

 private:
  int slow_letter(std::uint64_t n) const;

  PartitionSpec partition_;
  unsigned __int128 step_ = 0;
  std::vector<unsigned __int128> cuts_;
  unsigned __int128 cut_err_ = 0;
  bool fast_ok_ = false;
};

int letter_at(const CodingWord& word, std::uint64_t n);
/// One-hot vector of length l + 1.
std::vector<int> delta_vector(const CodingWord& word, std::uint64_t n);

/// A relation r_j - r_i = v t + u with 1 <= i < j <= l (1-based).
struct LatticeRelation {
  int i = 0;
  int j = 0;
  long v = 0;
  mpz_class u;
};

/// A boundary with r_i = v t + u. When v >= 1 the orbit point n = v lands on
/// it.
struct LatticePoint {
  int i = 0;
  long v = 0;
  mpz_class u;
};

struct ConditionCReport {
  std::optional<LatticeRelation> violation;
  /// Smallest ||r_j - r_i - v t|| over non-violating pairs and |v| <= bound.
  std::optional<BallReal> min_residual;
  LatticeRelation min_residual_at;
  /// Exact boundaries lying in Z t + Z.
  std::vector<LatticePoint> lattice_points;
  /// All pairs were decided from exactness tags.
  bool exact = true;
};

/// Searches |v| <= v_bound for r_j - r_i in v t + Z. Tagged pairs are decided
/// exactly. Untagged pairs throw Inconclusive when a residual cannot be
/// separated from zero.
ConditionCReport check_condition_C(const PartitionSpec& partition, long v_bound);

/// Result of eliminating r_j through r_j = r_i + v t + u with v >= 1. For
/// n >= v and m = n - v,
///   [frac(n t) < r_j] = [frac(m t) < r_i] + plus_one - [frac(m t) < c]
/// with c = frac(-v t) and plus_one = [r_j > r_i].
struct BoundaryReduction {
  PartitionSpec reduced;
  int removed = 0;  // j, 1-based in the original partition
  int kept = 0;     // i
  long v = 0;
  mpz_class u;
  /// n < v with frac(n t) < r_j.
  std::vector<std::uint64_t> prefix;
  bool plus_one = false;
  Boundary extra;
};

/// Throws InvalidArgument for v = 0 or |v| > v_bound. Swaps i and j when
/// v < 0.
BoundaryReduction reduce_boundary(const PartitionSpec& partition, const LatticeRelation& violation, long v_bound);

/// p(n) for n = 1..n_max over the factors starting at 0..horizon - n.
std::vector<std::uint64_t> subword_complexity(const CodingWord& word, int n_max, std::uint64_t horizon = 0);
std::vector<std::uint64_t> subword_complexity(const std::vector<int>& letters, int n_max);

}  // namespace rotcode
