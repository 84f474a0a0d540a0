#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "oomlab/algebra.hpp"
#include "oomlab/dimension.hpp"
#include "oomlab/oom.hpp"

namespace oomlab {

/// NC-OOM (V, T, v, ℓ) with output algebra A and V = C^dim.
///
/// The bilinear map T is stored as one operator per matrix unit of A;
/// T_a = Σ_β coeff_β(a) T_{e_β}. The generated state is
/// φ(a_1 ⊗ ... ⊗ a_n) = ℓ T_{a_n} ... T_{a_1} v.
class NcOomModel {
 public:
  NcOomModel(CStarAlgebra algebra, std::vector<Eigen::MatrixXcd> op_per_basis, Eigen::VectorXcd init,
             Eigen::RowVectorXcd eval);

  const CStarAlgebra& algebra() const { return algebra_; }
  std::size_t dim() const { return static_cast<std::size_t>(init_.size()); }
  const std::vector<Eigen::MatrixXcd>& op_per_basis() const { return op_per_basis_; }
  const Eigen::VectorXcd& init() const { return init_; }
  const Eigen::RowVectorXcd& eval() const { return eval_; }

  /// T_a. Throws ValidationError if `a` lives in another algebra.
  Eigen::MatrixXcd op(const AlgebraElement& a) const;
  Eigen::MatrixXcd unit_op() const;

  bool operator==(const NcOomModel&) const;

 private:
  CStarAlgebra algebra_;
  std::vector<Eigen::MatrixXcd> op_per_basis_;
  Eigen::VectorXcd init_;
  Eigen::RowVectorXcd eval_;
};

/// Sampled elementary tensors of algebra elements, one entry per slot.
using Tensor = std::vector<AlgebraElement>;

struct NcValidationReport {
  double init_residual = 0.0;  // |ℓ(v) - 1|
  double unit_residual = 0.0;  // ‖ℓ T_1 - ℓ‖_∞
  double worst_negative = 0.0; // max(0, -Re φ) over sampled positive tensors
  double worst_imaginary = 0.0;
  std::size_t depth = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double neg_tol = kDefaultNegTol;
  double imag_tol = 1e-9;
  bool passed = false;
};

/// Conditions 1 and 2 exactly; condition 3 spot-checked on `samples` random
/// tensors of positive elements b*b per length 1..depth.
NcValidationReport validate_ncoom(const NcOomModel& m, std::size_t depth = 4, std::size_t samples = 200,
                                  std::uint64_t seed = 0, double neg_tol = kDefaultNegTol);

/// φ(a_1 ⊗ ... ⊗ a_n); 1 for an empty tensor.
Complex nc_evaluate(const NcOomModel& m, const Tensor& factors);

/// φ on a tensor of matrix units given by basis indices.
Complex nc_evaluate_basis(const NcOomModel& m, const Word& basis_indices);

/// Classical OOM as NC-OOM over C(Δ); basis element d is the indicator of symbol d.
NcOomModel embed_classical(const OomModel& m);

using NcHankelBlock = BasicHankelBlock<Complex>;

/// Rows and columns are matrix-unit tuples; entry = φ(row ⊗ column).
NcHankelBlock nc_hankel(const NcOomModel& m, std::size_t past_len, std::size_t future_len, std::size_t jobs = 1);

DimensionReport nc_process_dimension(const NcOomModel& m, std::size_t max_level, double tol_rel = kDefaultRankTol,
                                     std::size_t jobs = 1);

NcOomModel nc_mixture_direct_sum(const std::vector<std::pair<double, NcOomModel>>& parts);

/// Order in which the factors of a tensor are applied.
/// kReverse is the convention of the finitely-correlated-states literature,
/// φ(a_1 ⊗ ... ⊗ a_n) = ℓ T_{a_1} ... T_{a_n} v / ℓ(v); it is only offered for
/// the translation-invariance check.
enum class OperatorOrder { kForward, kReverse };

struct NcStationarityReport {
  double residual = 0.0;          // over all matrix-unit tensors of length <= depth
  double sampled_residual = 0.0;  // over random tensors
  std::size_t depth = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  bool stationary = false;
};

/// max |φ(1 ⊗ a_1 ⊗ ... ⊗ a_n) - φ(a_1 ⊗ ... ⊗ a_n)| for n <= depth, exhaustively
/// over matrix units and additionally on `samples` random tensors per length.
NcStationarityReport nc_stationarity_check(const NcOomModel& m, std::size_t depth, std::size_t samples = 50,
                                           std::uint64_t seed = 0, OperatorOrder order = OperatorOrder::kForward);

/// φ under the given operator order.
Complex nc_evaluate_ordered(const NcOomModel& m, const Tensor& factors, OperatorOrder order);

}  // namespace oomlab
