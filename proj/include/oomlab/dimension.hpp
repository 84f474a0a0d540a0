#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "oomlab/oom.hpp"
#include "oomlab/words.hpp"

namespace oomlab {

inline constexpr double kDefaultRankTol = 1e-9;
inline constexpr std::size_t kMaxHankelEntries = 1'000'000;

/// Finite block of the Hankel matrix, entry(u, w) = P(uw).
///
/// Row u is the functional τ_u(P) restricted to the cylinders of `futures`.
/// Rows and columns are ordered by length, then lexicographically, so the block
/// for smaller lengths is always the leading principal submatrix.
template <typename Scalar>
struct BasicHankelBlock {
  std::vector<Word> pasts;
  std::vector<Word> futures;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> matrix;
  Eigen::VectorXd singular_values;  // nonincreasing
};

using HankelBlock = BasicHankelBlock<double>;

struct DimensionReport {
  std::map<std::size_t, std::size_t> rank_by_level;
  bool stabilized = false;
  std::optional<std::size_t> dimension;
  /// Smallest level from which the rank stays constant up to the last level.
  std::size_t stable_from = 0;
  double tol_rel = kDefaultRankTol;

  bool monotone() const;
};

/// Coordinates of τ_w(P) in the model's state space: T_{w_n} ... T_{w_1} v.
Eigen::VectorXd apply_tau(const OomModel& m, const Word& w);

/// Throws ResourceError if the block would have more than kMaxHankelEntries entries.
/// `jobs` > 1 fills rows in parallel; the result does not depend on it.
HankelBlock build_hankel(const ProcessOracle& p, std::size_t past_len, std::size_t future_len,
                         std::size_t jobs = 1);

/// Number of singular values strictly above tol_rel * max(sv); 0 if sv is all zero.
std::size_t numerical_rank(const Eigen::VectorXd& singular_values, double tol_rel = kDefaultRankTol);

/// Rank of the square (L, L) Hankel blocks for L = 1..max_level. The dimension is
/// declared only if the ranks at max_level - 1 and max_level agree, which needs
/// max_level >= 2. Throws ValidationError for max_level == 0.
DimensionReport process_dimension(const ProcessOracle& p, std::size_t max_level, double tol_rel = kDefaultRankTol,
                                  std::size_t jobs = 1);

/// Restricts to the reachable span {T_w v}, then quotients by the joint kernel
/// of {ℓ T_w}. Both spans are built breadth-first with orthonormal bases.
OomModel minimize_oom(const OomModel& m, double tol_rel = kDefaultRankTol);

/// max_{|w| <= max_len} |P_1(w) - P_2(w)|, computed from raw (unclamped) values.
double max_word_deviation(const OomModel& a, const OomModel& b, std::size_t max_len);

/// True iff max_word_deviation(a, b, max_len) <= tol. Throws ValidationError on alphabet mismatch.
bool equivalent(const OomModel& a, const OomModel& b, std::size_t max_len, double tol);

namespace detail {

std::size_t hankel_side(std::size_t alphabet_size, std::size_t len);

/// Builds a DimensionReport from the largest square block, whose leading
/// principal submatrices are the blocks of the lower levels.
template <typename Matrix>
DimensionReport rank_ladder(const Matrix& full, std::size_t alphabet_size, std::size_t max_level, double tol_rel);

}  // namespace detail

}  // namespace oomlab
