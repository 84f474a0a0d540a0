#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace oomlab {

using Complex = std::complex<double>;

/// Finite-dimensional C*-algebra M_{d_1} ⊕ ... ⊕ M_{d_k} over the complex numbers.
///
/// The basis is the set of matrix units E^{(k)}_{ij}, ordered block-major and
/// row-major inside each block. Operator lists of NC-OOMs are indexed in this
/// order, so it must never change.
class CStarAlgebra {
 public:
  struct MatrixUnit {
    std::size_t block;
    std::size_t row;
    std::size_t col;
  };

  /// Throws ValidationError if `block_dims` is empty or has an entry < 1.
  explicit CStarAlgebra(const std::vector<int>& block_dims);

  /// C(Δ) for |Δ| = n: n blocks of size 1.
  static CStarAlgebra commutative(std::size_t n);

  const std::vector<std::size_t>& block_dims() const { return block_dims_; }
  std::size_t total_dim() const { return total_dim_; }
  std::size_t num_blocks() const { return block_dims_.size(); }
  bool is_commutative() const;

  MatrixUnit unit_at(std::size_t basis_index) const;
  std::size_t basis_index(std::size_t block, std::size_t row, std::size_t col) const;

  bool operator==(const CStarAlgebra&) const = default;

 private:
  std::vector<std::size_t> block_dims_;
  std::vector<std::size_t> offsets_;
  std::size_t total_dim_ = 0;
};

CStarAlgebra construct_algebra(const std::vector<int>& block_dims);

class AlgebraElement {
 public:
  /// Throws ValidationError if the block shapes do not match the algebra.
  AlgebraElement(CStarAlgebra algebra, std::vector<Eigen::MatrixXcd> blocks);

  static AlgebraElement zero(const CStarAlgebra& algebra);

  /// Inverse of coefficients(): coefficient β multiplies the β-th matrix unit.
  static AlgebraElement from_coefficients(const CStarAlgebra& algebra, const Eigen::VectorXcd& coeffs);

  const CStarAlgebra& algebra() const { return algebra_; }
  const std::vector<Eigen::MatrixXcd>& blocks() const { return blocks_; }
  const Eigen::MatrixXcd& block(std::size_t k) const { return blocks_.at(k); }

  /// Coordinates w.r.t. the matrix-unit basis (the matrix entries, block-major, row-major).
  Eigen::VectorXcd coefficients() const;

  AlgebraElement adjoint() const;

  /// max |entry| of a - adjoint(a).
  double hermiticity_defect() const;

  AlgebraElement operator+(const AlgebraElement& other) const;
  AlgebraElement operator-(const AlgebraElement& other) const;
  AlgebraElement operator*(const AlgebraElement& other) const;
  AlgebraElement operator*(Complex scalar) const;

  /// Exact entrywise equality.
  bool operator==(const AlgebraElement& other) const;

 private:
  void require_same_algebra(const AlgebraElement& other) const;

  CStarAlgebra algebra_;
  std::vector<Eigen::MatrixXcd> blocks_;
};

AlgebraElement operator*(Complex scalar, const AlgebraElement& a);

AlgebraElement unit_element(const CStarAlgebra& algebra);

/// True iff `a` is self-adjoint within `tol` and every block's smallest
/// eigenvalue is >= -tol. Non-self-adjoint input gives false.
bool is_positive(const AlgebraElement& a, double tol = 1e-10);

/// All matrix units in basis order.
std::vector<AlgebraElement> basis_elements(const CStarAlgebra& algebra);

}  // namespace oomlab
