#include "oomlab/algebra.hpp"

#include <algorithm>
#include <string>

#include "oomlab/errors.hpp"

namespace oomlab {

CStarAlgebra::CStarAlgebra(const std::vector<int>& block_dims) {
  if (block_dims.empty()) throw ValidationError("algebra needs at least one block");
  block_dims_.reserve(block_dims.size());
  for (int d : block_dims) {
    if (d < 1) throw ValidationError("algebra block sizes must be >= 1, got " + std::to_string(d));
    offsets_.push_back(total_dim_);
    block_dims_.push_back(static_cast<std::size_t>(d));
    total_dim_ += static_cast<std::size_t>(d) * static_cast<std::size_t>(d);
  }
}

CStarAlgebra CStarAlgebra::commutative(std::size_t n) {
  return CStarAlgebra(std::vector<int>(n, 1));
}

bool CStarAlgebra::is_commutative() const {
  return std::all_of(block_dims_.begin(), block_dims_.end(), [](std::size_t d) { return d == 1; });
}

CStarAlgebra::MatrixUnit CStarAlgebra::unit_at(std::size_t basis_index) const {
  if (basis_index >= total_dim_) throw ValidationError("basis index out of range");
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), basis_index);
  const auto k = static_cast<std::size_t>(it - offsets_.begin()) - 1;
  const std::size_t local = basis_index - offsets_[k];
  return {k, local / block_dims_[k], local % block_dims_[k]};
}

std::size_t CStarAlgebra::basis_index(std::size_t block, std::size_t row, std::size_t col) const {
  if (block >= block_dims_.size() || row >= block_dims_[block] || col >= block_dims_[block]) {
    throw ValidationError("matrix unit out of range");
  }
  return offsets_[block] + row * block_dims_[block] + col;
}

CStarAlgebra construct_algebra(const std::vector<int>& block_dims) { return CStarAlgebra(block_dims); }

AlgebraElement::AlgebraElement(CStarAlgebra algebra, std::vector<Eigen::MatrixXcd> blocks)
    : algebra_(std::move(algebra)), blocks_(std::move(blocks)) {
  if (blocks_.size() != algebra_.num_blocks()) {
    throw ValidationError("element has " + std::to_string(blocks_.size()) + " blocks, algebra has " +
                          std::to_string(algebra_.num_blocks()));
  }
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const auto d = static_cast<Eigen::Index>(algebra_.block_dims()[k]);
    if (blocks_[k].rows() != d || blocks_[k].cols() != d) {
      throw ValidationError("element block " + std::to_string(k) + " must be " + std::to_string(d) + "x" +
                            std::to_string(d));
    }
  }
}

AlgebraElement AlgebraElement::zero(const CStarAlgebra& algebra) {
  std::vector<Eigen::MatrixXcd> blocks;
  for (std::size_t d : algebra.block_dims()) {
    blocks.push_back(Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)));
  }
  return AlgebraElement(algebra, std::move(blocks));
}

AlgebraElement AlgebraElement::from_coefficients(const CStarAlgebra& algebra, const Eigen::VectorXcd& coeffs) {
  if (static_cast<std::size_t>(coeffs.size()) != algebra.total_dim()) {
    throw ValidationError("coefficient vector length must equal algebra dimension");
  }
  AlgebraElement out = zero(algebra);
  Eigen::Index beta = 0;
  for (auto& b : out.blocks_) {
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
      for (Eigen::Index j = 0; j < b.cols(); ++j) b(i, j) = coeffs(beta++);
    }
  }
  return out;
}

Eigen::VectorXcd AlgebraElement::coefficients() const {
  Eigen::VectorXcd c(static_cast<Eigen::Index>(algebra_.total_dim()));
  Eigen::Index beta = 0;
  for (const auto& b : blocks_) {
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
      for (Eigen::Index j = 0; j < b.cols(); ++j) c(beta++) = b(i, j);
    }
  }
  return c;
}

AlgebraElement AlgebraElement::adjoint() const {
  std::vector<Eigen::MatrixXcd> blocks;
  blocks.reserve(blocks_.size());
  for (const auto& b : blocks_) blocks.push_back(b.adjoint());
  return AlgebraElement(algebra_, std::move(blocks));
}

double AlgebraElement::hermiticity_defect() const {
  double worst = 0.0;
  for (const auto& b : blocks_) {
    if (b.size() == 0) continue;
    worst = std::max(worst, (b - b.adjoint()).cwiseAbs().maxCoeff());
  }
  return worst;
}

void AlgebraElement::require_same_algebra(const AlgebraElement& other) const {
  if (!(algebra_ == other.algebra_)) throw ValidationError("elements belong to different algebras");
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& other) const {
  require_same_algebra(other);
  AlgebraElement out = *this;
  for (std::size_t k = 0; k < blocks_.size(); ++k) out.blocks_[k] += other.blocks_[k];
  return out;
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& other) const {
  require_same_algebra(other);
  AlgebraElement out = *this;
  for (std::size_t k = 0; k < blocks_.size(); ++k) out.blocks_[k] -= other.blocks_[k];
  return out;
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement& other) const {
  require_same_algebra(other);
  AlgebraElement out = *this;
  for (std::size_t k = 0; k < blocks_.size(); ++k) out.blocks_[k] = blocks_[k] * other.blocks_[k];
  return out;
}

AlgebraElement AlgebraElement::operator*(Complex scalar) const {
  AlgebraElement out = *this;
  for (auto& b : out.blocks_) b *= scalar;
  return out;
}

AlgebraElement operator*(Complex scalar, const AlgebraElement& a) { return a * scalar; }

bool AlgebraElement::operator==(const AlgebraElement& other) const {
  if (!(algebra_ == other.algebra_)) return false;
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    if (blocks_[k] != other.blocks_[k]) return false;
  }
  return true;
}

AlgebraElement unit_element(const CStarAlgebra& algebra) {
  std::vector<Eigen::MatrixXcd> blocks;
  for (std::size_t d : algebra.block_dims()) {
    blocks.push_back(Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)));
  }
  return AlgebraElement(algebra, std::move(blocks));
}

bool is_positive(const AlgebraElement& a, double tol) {
  if (a.hermiticity_defect() > tol) return false;
  for (const auto& b : a.blocks()) {
    const Eigen::MatrixXcd h = 0.5 * (b + b.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol) return false;
  }
  return true;
}

std::vector<AlgebraElement> basis_elements(const CStarAlgebra& algebra) {
  std::vector<AlgebraElement> out;
  out.reserve(algebra.total_dim());
  for (std::size_t beta = 0; beta < algebra.total_dim(); ++beta) {
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(algebra.total_dim()));
    c(static_cast<Eigen::Index>(beta)) = 1.0;
    out.push_back(AlgebraElement::from_coefficients(algebra, c));
  }
  return out;
}

}  // namespace oomlab
