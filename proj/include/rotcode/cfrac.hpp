#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <utility>
#include <vector>

#include "rotcode/ball.hpp"
#include "rotcode/theta.hpp"

namespace rotcode {

/// Certified continued-fraction expansion [a_0; a_1, ..., a_depth].
///
/// Convergents use the seeds p_{-1} = 1, q_{-1} = 0, p_{-2} = 0, q_{-2} = 1,
/// so that p_m q_{m-1} - p_{m-1} q_m = (-1)^{m-1} and
/// q_m x - p_m = (-1)^m / (q_m x_{m+1} + q_{m-1}), where x_{m+1} is the
/// complete quotient [a_{m+1}; a_{m+2}, ...].
struct ContinuedFraction {
  std::vector<mpz_class> quotients;
  std::vector<mpz_class> p;
  std::vector<mpz_class> q;
  /// tails[m] encloses x_{m+1}, for m = 0 .. depth - 1.
  std::vector<BallReal> tails;
  /// Precision at which the quotients were certified.
  long working_bits = 0;

  int depth() const { return static_cast<int>(quotients.size()) - 1; }
  /// q_{m}, with q_{-1} = 0.
  mpz_class q_at(int m) const { return m < 0 ? mpz_class(m == -1 ? 0 : 1) : q.at(static_cast<std::size_t>(m)); }
  mpz_class p_at(int m) const { return m < 0 ? mpz_class(m == -1 ? 1 : 0) : p.at(static_cast<std::size_t>(m)); }

  /// Builds p, q from `quotients` by the standard recurrence.
  static ContinuedFraction from_quotients(std::vector<mpz_class> quotients);
};

/// Expands theta to `depth` partial quotients beyond a_0. Every quotient is a
/// floor decided by a ball inside one unit interval; precision doubles until
/// that holds. Throws PrecisionExhausted (a suspiciously rational input) or
/// InvalidArgument for depth < 1.
ContinuedFraction expand(const ThetaOracle& theta, int depth);

std::vector<std::pair<mpz_class, mpz_class>> convergents(const ContinuedFraction& cf);

/// Ball of q_m theta - p_m, cross-checked against the complete-quotient
/// identity. Requires m <= depth - 1.
BallReal signed_error(const ContinuedFraction& cf, int m, const ThetaOracle& theta);

/// (-1)^m / (q_m x_{m+1} + q_{m-1}) from the stored tails.
BallReal signed_error_from_tail(const ContinuedFraction& cf, int m);

/// ||M theta||, the distance from M theta to the nearest integer.
BallReal nearest_distance(const mpz_class& M, const ThetaOracle& theta);

/// Expansion deep enough that its last denominator exceeds `bound`.
ContinuedFraction expand_until_denominator(const ThetaOracle& theta, const mpz_class& bound);

struct BestApproximationScan {
  std::uint64_t limit = 0;
  /// Levels N with q_{N+1} <= limit.
  int levels = 0;
  std::uint64_t comparisons = 0;
  /// M < q_{N+1}, M != q_N with ||M theta|| <= ||q_N theta||.
  std::uint64_t violations = 0;
};

/// Exhaustive check that q_N is the best approximation below q_{N+1}.
BestApproximationScan best_approximation_scan(const ThetaOracle& theta, std::uint64_t limit);

}  // namespace rotcode
