#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rotcode/cfrac.hpp"
#include "rotcode/coding.hpp"
#include "rotcode/digits.hpp"
#include "rotcode/error.hpp"

namespace rotcode {

/// Digit value of each letter: the weights u_i when present, else i itself.
std::vector<ComplexRational> digit_values(const PartitionSpec& partition);

/// The eventually periodic word U V V V ... with |U| = |V| = q_n.
struct Approximant {
  int level = 0;
  int window = 0;
  std::uint64_t q = 0;       // q_n = r_n = s_n
  std::uint64_t q_next = 0;  // q_{n+1}
  /// True letters a_0 .. a_{m-1} with m = (w + 1) q.
  std::vector<int> letters;
  std::vector<ComplexRational> values;

  std::uint64_t r() const { return q; }
  std::uint64_t s() const { return q; }
  /// r + w s.
  std::uint64_t window_end() const { return (static_cast<std::uint64_t>(window) + 1) * q; }
  std::vector<int> U() const { return {letters.begin(), letters.begin() + static_cast<long>(q)}; }
  std::vector<int> V() const { return {letters.begin() + static_cast<long>(q), letters.begin() + static_cast<long>(2 * q)}; }
  /// Letter j of the approximant, for any j.
  int letter(std::uint64_t j) const { return j < 2 * q ? letters[j] : letters[q + (j - q) % q]; }
  /// p_n(b) = sum_{j < r+s} a_j b^(r+s-j) - sum_{j < r} a_j b^(r-j), so that
  /// the approximant's value is p_n / (b^r (b^s - 1)).
  BallComplex numerator(const Base& b, mpfr_prec_t prec) const;
};

/// Throws InvalidArgument for w < 2 or a level beyond the expansion.
Approximant build(const CodingWord& word, const ContinuedFraction& cf, int n, int w, int jobs = 1);

/// One arithmetic progression i, i + s, i + 2s, ... of mismatches.
struct Progression {
  std::uint64_t start = 0;
  /// c = a_i - a_{i-s} as digit values.
  ComplexRational change;
  /// The true letter is the same along the progression inside the window.
  bool constant = true;
};

struct MismatchRecord {
  int level = 0;
  int window = 0;
  std::uint64_t q = 0;
  /// Positions j < r + w s with a_j != a_j^(n) as digit values.
  std::vector<std::uint64_t> positions;
  /// Sorted by start; starts are distinct mod q.
  std::vector<Progression> progressions;
  /// Progression starts i_l in [r + j s, r + (j+1) s) for j = 1 .. w-1.
  std::vector<int> window_counts;
  /// min_i ||i_l t - r_i|| over boundaries including 0, per progression.
  std::vector<BallReal> boundary_distance;
  /// ||q_n theta||.
  BallReal step_distance;

  int t() const { return static_cast<int>(progressions.size()); }
  std::optional<std::uint64_t> min_gap() const;
};

/// Exhaustive scan of the window. Throws StructureViolation when the
/// positions in some residue class are not all of i, i + s, ... up to the
/// window end.
MismatchRecord mismatches(const CodingWord& word, const Approximant& approx);

/// Largest m with a_{i + m' s} = a_i for all 0 <= m' <= m, minimized over
/// the progressions; scanned up to `cap` steps.
std::uint64_t stability_length(const CodingWord& word, const MismatchRecord& rec, std::uint64_t cap);

struct ConditionRow {
  int n = 0;
  int w = 0;
  std::uint64_t q = 0;
  std::uint64_t q_next = 0;
  /// q_n > 2 (w + 1) / eta, the range where the orbit moves by less than
  /// eta / 2 over a window.
  bool asymptotic = false;
  int t = 0;
  int max_window_count = 0;
  int bound = 0;  // 2 |A|
  /// Progression structure holds and every per-window count is <= 2 |A|.
  Status bpp = Status::Pass;
  /// t_n <= 2 |A|.
  Status t_bound = Status::NotApplicable;
  /// t_n <= 2 (|A| + 1), counting 0 as a boundary.
  Status t_bound_with_zero = Status::NotApplicable;
  std::optional<std::uint64_t> min_gap;
  std::uint64_t stability = 0;
  std::uint64_t f0 = 0;
  Status lpp = Status::NotApplicable;
  Status near_boundary = Status::NotApplicable;
  std::string note;
};

struct ConditionsReport {
  std::vector<ConditionRow> rows;
  /// Min gaps over the last `egp_span` rows that have one.
  std::vector<std::uint64_t> egp_tail;
  Status egp = Status::NotApplicable;
};

/// Rows for n_from <= n <= n_to at window w. f0(s) = max(1, floor(eta s / 4)).
ConditionsReport verify_conditions(const CodingWord& word, const ContinuedFraction& cf, int n_from, int n_to, int w,
                                   int egp_span = 5, int jobs = 1);

struct ApproximantError {
  /// |alpha - alpha^(n) - sum_l c_l b^(s - i_l) / (b^s - 1)|.
  BallReal residual;
  /// 2 H |b|^-(r + w s).
  BallReal bound;
  /// Same with the correction sum_l c_l / (b^(i_l) (b^s - 1)).
  BallReal residual_shifted;
  /// |alpha b^(r+s) - alpha b^r - p_n - sum_l c_l b^(r + s - i_l)|.
  BallReal small_form;
  /// 2 H |b|^-((w-1) s).
  BallReal small_bound;
  /// |alpha^(n) - direct sum of the periodic word| stays within radii.
  bool periodic_agrees = false;
  /// The radius of alpha is at most bound / 100.
  bool resolved = false;
  Status status = Status::Inconclusive;
  long bits = 0;
};

/// Throws BoundViolated when residual > bound is certified.
ApproximantError approximant_error(const CodingWord& word, const Approximant& approx, const MismatchRecord& rec,
                                   const Base& b);

}  // namespace rotcode
