#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rotcode/coding.hpp"
#include "rotcode/digits.hpp"

namespace rotcode {

struct SeriesValue {
  BallComplex value;
  std::uint64_t terms_used = 0;
  /// Bound on the omitted tail, already included in the radius of `value`.
  Mpfr tail_bound;
  long bits = 0;

  /// Real part to `digits` decimals and the certified error exponent.
  std::string describe(int digits) const;
};

/// ceil((digits + 20) ln 10 / ln |b|).
std::uint64_t terms_for_digits(const Base& b, long digits);

/// T(b, theta, A, u) = sum_n u_{a_n} b^-n with radius <= 10^-digits.
SeriesValue eval_T(const Base& b, const CodingWord& word, const std::vector<ComplexRational>& u, long digits,
                   int jobs = 1);
/// Uses the partition's weights u.
SeriesValue eval_T(const Base& b, const CodingWord& word, long digits, int jobs = 1);

/// sum_n [frac(n t) < r] b^-n for one boundary r relative to t = frac(theta).
SeriesValue indicator_sum(const Base& b, const ThetaOracle& theta, const Boundary& r, long digits);

/// sum_i (u_i - u_{i+1}) sum_n [frac(n t) < r_{i+1}] b^-n with u_{l+1} = 0,
/// each inner sum from its own one-boundary coding.
SeriesValue eval_T_telescoped(const Base& b, const PartitionSpec& partition, const std::vector<ComplexRational>& u,
                              long digits);

/// S(b, theta, A, v) = sum_{n >= 0} sum_i v_i b^-floor(n theta + r_i), with
/// the raw theta of the partition and its weights v. Throws InvalidArgument
/// for theta <= 0 and BoundaryHit when n theta + r_i is provably an integer.
SeriesValue eval_S(const Base& b, const PartitionSpec& partition, long digits);

/// S(b, theta, A, v) = T(b, 1/theta, A', u') for theta > 1.
struct SReduction {
  ThetaOracle theta;
  /// A' = {r_i / theta} and {1 - (1 - r_i) / theta}, with u' attached.
  PartitionSpec partition;
  std::vector<ComplexRational> u;
  /// A' = {1 - (1 - r_i) / theta} with u_{i-1} - u_i = v_i, u_l = 0.
  PartitionSpec literal_partition;
  std::vector<ComplexRational> literal_u;
};

/// Throws InvalidArgument for theta < 1 or missing weights, and
/// ConditionCViolation when A' has a lattice relation with |v| <= v_bound.
SReduction reduce_S_to_T(const PartitionSpec& partition, long v_bound = 1000);

struct CountingCheck {
  std::uint64_t m_max = 0;
  long floor_inverse = 0;  // floor(1 / theta)
  int max_count = 0;
  std::uint64_t mismatches = 0;
  std::optional<std::uint64_t> first_mismatch;
};

/// Compares #{n >= 0 : floor(n theta + r) = m} by enumeration with
/// floor(1/theta) + [frac((m - r) / theta) > 1 - frac(1 / theta)] for m <= m_max.
CountingCheck counting_oracle(const ThetaOracle& theta, const mpq_class& r, std::uint64_t m_max);

struct ShiftIdentity {
  SeriesValue lhs;
  /// prefix + b^-v (D_{r_i} + [r_j > r_i] b/(b-1) - D_c).
  BallComplex rhs;
  /// prefix + b^-v D_{r_i}.
  BallComplex rhs_literal;
  BallReal discrepancy;
  BallReal literal_discrepancy;
};

ShiftIdentity shift_identity(const Base& b, const PartitionSpec& partition, const BoundaryReduction& red, long digits);

/// Throws RootOfUnity when z^k = 1 for some 1 <= k <= max_order and
/// InvalidArgument unless |z| = 1 exactly.
void check_not_root_of_unity(const ComplexRational& z, unsigned max_order = 360);

struct TrigPair {
  /// sum over n with cos(n x) > 0 (or sin(n x) > 0) of cos(n x) b^-n,
  /// from exact powers of z = e^{ix}.
  BallReal direct;
  /// (T(b conj z) + T(b z)) / 2 for cos, (T(b conj z) - T(b z)) / 2i for sin.
  BallComplex combination;
  BallReal discrepancy;
  std::uint64_t terms_used = 0;
};

/// theta_1 = arg(z) / 2 pi, A = {1/4, 3/4}, u = (1, 0, 1).
TrigPair cosine_pair(const mpq_class& modulus, const ComplexRational& z, long digits);
/// A = {1/2}, u = (1, 0).
TrigPair sine_pair(const mpq_class& modulus, const ComplexRational& z, long digits);

struct IndependenceWitness {
  int max_exponent = 0;
  int pairs_checked = 0;
  /// Pairs (x, y) with b1^x = b2^y.
  int coincidences = 0;
  /// Pairs with |b1|^x = |b2|^y; all have x = y when |b1| = |b2| > 1.
  int equal_modulus = 0;
  int equal_modulus_off_diagonal = 0;
};

IndependenceWitness multiplicative_independence(const ComplexRational& b1, const ComplexRational& b2,
                                                int max_exponent = 50);

}  // namespace rotcode
