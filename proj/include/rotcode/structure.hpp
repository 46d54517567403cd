#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rotcode/approximant.hpp"
#include "rotcode/cfrac.hpp"
#include "rotcode/coding.hpp"

namespace rotcode {

struct IwMember {
  std::uint64_t M = 0;
  /// Smallest l >= 1 with a_{M + l q} != a_{M + (l-1) q}.
  int step = 0;
  /// Boundary index nearest to frac(M t), 0 meaning r_0 = 0.
  int boundary = 0;
  BallReal distance;
};

struct IwSet {
  int level = 0;
  int window = 0;
  std::uint64_t q = 0;
  /// ||q theta||.
  BallReal step_distance;
  std::vector<IwMember> members;
  /// Largest number of members sharing (step, boundary).
  int max_multiplicity = 0;
  /// Every member lies within (w + 1) ||q theta|| of a boundary.
  bool near_boundary = true;

  std::vector<std::uint64_t> residues() const;
};

/// I_w(N) = {1 <= M < q_N : a_{M + l1 q_N} != a_{M + l2 q_N} for some
/// 0 <= l1 < l2 <= w}, by exhaustive scan.
IwSet compute_I_w(const CodingWord& word, const ContinuedFraction& cf, int N, int w, int jobs = 1);

struct TailChangeRecord {
  int level = 0;
  int window = 0;
  std::uint64_t q = 0;
  std::uint64_t q_next = 0;
  std::uint64_t search_limit = 0;
  /// p > r + w s with a_p != a_pbar, pbar in [r + 1, r + s], p = pbar mod s,
  /// p outside every mismatch residue class.
  std::vector<std::uint64_t> kappa;
  /// Fewer entries than requested were found below the limit.
  bool not_found = false;
  /// kappa_2 - kappa_1, kappa_2 / (q_n q_{n+1}) and log kappa_1.
  std::optional<std::uint64_t> gap() const;
  std::optional<double> ratio() const;
  std::optional<double> log_kappa1() const;
  /// min over boundary pairs (i, i'), including 0, of
  /// ||(kappa_2 - kappa_1) theta - (r_i - r_i')||.
  std::optional<BallReal> pair_residual;
  int pair_i = 0;
  int pair_j = 0;
  /// Nearest boundaries of frac(kappa_1 t) and frac(kappa_2 t) agree.
  bool same_boundary = false;
};

/// search_limit = 0 means q_n q_{n+1}. Mismatch residues are taken from the
/// approximant window without requiring the progression structure.
TailChangeRecord tail_changes(const CodingWord& word, const Approximant& approx, std::uint64_t search_limit = 0,
                              int count = 2);

struct CensusCell {
  int n = 0;
  int w = 0;
  std::uint64_t q = 0;
  /// [r + eps w s, r + w s].
  std::uint64_t window_lo = 0;
  std::uint64_t window_hi = 0;
  /// First mismatch of each residue class, sorted.
  std::vector<std::uint64_t> starts;
  /// Starts inside the window; empty means the window is free.
  std::vector<std::uint64_t> hits;
  bool free = false;
  bool degenerate = false;
};

struct CensusReport {
  double epsilon = 0;
  std::vector<CensusCell> cells;
  /// Some non-degenerate window is free.
  bool iv1_like = false;
  /// Every non-degenerate window is hit.
  bool iv2_like = false;
  /// I_w(n) grows with w at every scanned level.
  bool monotone_in_w = true;
  /// (kappa_2 - kappa_1, log kappa_1) per level at the smallest w.
  std::vector<std::pair<std::uint64_t, double>> kappa_pairs;
  /// Over windows of 2|A| + 1 consecutive kappas: max diameter / kappa and
  /// min ratio of consecutive kappas, per level.
  std::vector<double> f1;
  std::vector<double> f2;
};

/// epsilon >= 1 leaves an empty window, reported free and degenerate.
CensusReport gap_census(const CodingWord& word, const ContinuedFraction& cf, int n_from, int n_to,
                        const std::vector<int>& w_list, double epsilon, int jobs = 1);

}  // namespace rotcode
