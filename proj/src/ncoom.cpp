#include "oomlab/ncoom.hpp"

#include <cmath>
#include <random>
#include <string>

#include "oomlab/errors.hpp"
#include "parallel.hpp"

namespace oomlab {
namespace {

Eigen::MatrixXcd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double re = normal(gen);
      const double im = normal(gen);
      m(i, j) = Complex(re, im);
    }
  }
  return m;
}

// b*b with unit total trace; every other draw is a rank-one projector direction.
AlgebraElement random_positive(const CStarAlgebra& alg, std::mt19937_64& gen, bool rank_one) {
  std::vector<Eigen::MatrixXcd> blocks;
  double trace = 0.0;
  for (std::size_t d : alg.block_dims()) {
    const auto n = static_cast<Eigen::Index>(d);
    const Eigen::MatrixXcd b = gaussian_matrix(rank_one ? 1 : n, n, gen);
    Eigen::MatrixXcd a = b.adjoint() * b;
    trace += a.trace().real();
    blocks.push_back(std::move(a));
  }
  for (auto& a : blocks) a /= trace;
  return AlgebraElement(alg, std::move(blocks));
}

AlgebraElement random_element(const CStarAlgebra& alg, std::mt19937_64& gen) {
  std::vector<Eigen::MatrixXcd> blocks;
  for (std::size_t d : alg.block_dims()) {
    const auto n = static_cast<Eigen::Index>(d);
    blocks.push_back(gaussian_matrix(n, n, gen));
  }
  return AlgebraElement(alg, std::move(blocks));
}

}  // namespace

NcOomModel::NcOomModel(CStarAlgebra algebra, std::vector<Eigen::MatrixXcd> op_per_basis, Eigen::VectorXcd init,
                       Eigen::RowVectorXcd eval)
    : algebra_(std::move(algebra)),
      op_per_basis_(std::move(op_per_basis)),
      init_(std::move(init)),
      eval_(std::move(eval)) {
  const Eigen::Index n = init_.size();
  if (n < 1) throw ValidationError("NC-OOM dimension must be >= 1");
  if (eval_.size() != n) throw ValidationError("eval has length " + std::to_string(eval_.size()) +
                                               ", expected " + std::to_string(n));
  if (op_per_basis_.size() != algebra_.total_dim()) {
    throw ValidationError("op_per_basis needs " + std::to_string(algebra_.total_dim()) + " operators, got " +
                          std::to_string(op_per_basis_.size()));
  }
  for (const auto& t : op_per_basis_) {
    if (t.rows() != n || t.cols() != n) {
      throw ValidationError("op_per_basis entries must be " + std::to_string(n) + "x" + std::to_string(n));
    }
  }
}

Eigen::MatrixXcd NcOomModel::op(const AlgebraElement& a) const {
  if (!(a.algebra() == algebra_)) throw ValidationError("element does not belong to the model's algebra");
  const Eigen::VectorXcd c = a.coefficients();
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(init_.size(), init_.size());
  for (Eigen::Index beta = 0; beta < c.size(); ++beta) {
    if (c(beta) != Complex(0.0)) t += c(beta) * op_per_basis_[static_cast<std::size_t>(beta)];
  }
  return t;
}

Eigen::MatrixXcd NcOomModel::unit_op() const {
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(init_.size(), init_.size());
  for (std::size_t k = 0; k < algebra_.num_blocks(); ++k) {
    for (std::size_t i = 0; i < algebra_.block_dims()[k]; ++i) t += op_per_basis_[algebra_.basis_index(k, i, i)];
  }
  return t;
}

bool NcOomModel::operator==(const NcOomModel& o) const {
  if (!(algebra_ == o.algebra_) || init_ != o.init_ || eval_ != o.eval_) return false;
  for (std::size_t b = 0; b < op_per_basis_.size(); ++b) {
    if (op_per_basis_[b] != o.op_per_basis_[b]) return false;
  }
  return true;
}

Complex nc_evaluate_ordered(const NcOomModel& m, const Tensor& factors, OperatorOrder order) {
  Eigen::VectorXcd x = m.init();
  if (order == OperatorOrder::kForward) {
    for (const auto& a : factors) x = m.op(a) * x;
    return (m.eval() * x)(0);
  }
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) x = m.op(*it) * x;
  return (m.eval() * x)(0) / (m.eval() * m.init())(0);
}

Complex nc_evaluate(const NcOomModel& m, const Tensor& factors) {
  return nc_evaluate_ordered(m, factors, OperatorOrder::kForward);
}

Complex nc_evaluate_basis(const NcOomModel& m, const Word& basis_indices) {
  Eigen::VectorXcd x = m.init();
  for (Symbol b : basis_indices) {
    if (b >= m.op_per_basis().size()) throw ValidationError("basis index out of range");
    x = m.op_per_basis()[b] * x;
  }
  return (m.eval() * x)(0);
}

NcValidationReport validate_ncoom(const NcOomModel& m, std::size_t depth, std::size_t samples, std::uint64_t seed,
                                  double neg_tol) {
  NcValidationReport r;
  r.depth = depth;
  r.samples = samples;
  r.seed = seed;
  r.neg_tol = neg_tol;
  r.init_residual = std::abs((m.eval() * m.init())(0) - 1.0);
  r.unit_residual = (m.eval() * m.unit_op() - m.eval()).cwiseAbs().maxCoeff();

  std::mt19937_64 gen(seed);
  for (std::size_t n = 1; n <= depth; ++n) {
    for (std::size_t s = 0; s < samples; ++s) {
      Tensor t;
      for (std::size_t i = 0; i < n; ++i) t.push_back(random_positive(m.algebra(), gen, (s + i) % 2 == 1));
      const Complex phi = nc_evaluate(m, t);
      r.worst_negative = std::max(r.worst_negative, -phi.real());
      r.worst_imaginary = std::max(r.worst_imaginary, std::abs(phi.imag()));
    }
  }
  r.passed = r.init_residual <= kConditionTol && r.unit_residual <= kConditionTol && r.worst_negative <= neg_tol &&
             r.worst_imaginary <= r.imag_tol;
  return r;
}

NcOomModel embed_classical(const OomModel& m) {
  std::vector<Eigen::MatrixXcd> ops;
  for (const auto& t : m.operators()) ops.push_back(t.cast<Complex>());
  return NcOomModel(CStarAlgebra::commutative(m.alphabet().size()), std::move(ops), m.init().cast<Complex>(),
                    m.eval().cast<Complex>());
}

NcHankelBlock nc_hankel(const NcOomModel& m, std::size_t past_len, std::size_t future_len, std::size_t jobs) {
  const std::size_t k = m.algebra().total_dim();
  const std::size_t rows = count_words(k, 0, past_len);
  const std::size_t cols = count_words(k, 0, future_len);
  if (rows > kMaxHankelEntries || cols > kMaxHankelEntries / rows) {
    throw ResourceError("NC Hankel block " + std::to_string(rows) + "x" + std::to_string(cols) + " exceeds " +
                        std::to_string(kMaxHankelEntries) + " entries");
  }
  NcHankelBlock h;
  h.pasts = enumerate_words(k, 0, past_len);
  h.futures = enumerate_words(k, 0, future_len);
  // φ(u ⊗ w) = (ℓ T_w)(T_u v): precompute states for rows and covectors for columns.
  std::vector<Eigen::VectorXcd> states(rows);
  std::vector<Eigen::RowVectorXcd> covectors(cols);
  detail::parallel_for(rows, jobs, [&](std::size_t i) {
    Eigen::VectorXcd x = m.init();
    for (Symbol b : h.pasts[i]) x = m.op_per_basis()[b] * x;
    states[i] = std::move(x);
  });
  detail::parallel_for(cols, jobs, [&](std::size_t j) {
    Eigen::RowVectorXcd y = m.eval();
    const Word& w = h.futures[j];
    for (auto it = w.rbegin(); it != w.rend(); ++it) y = y * m.op_per_basis()[*it];
    covectors[j] = std::move(y);
  });
  h.matrix.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  detail::parallel_for(rows, jobs, [&](std::size_t i) {
    for (std::size_t j = 0; j < cols; ++j) {
      h.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (covectors[j] * states[i])(0);
    }
  });
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(h.matrix);
  h.singular_values = svd.singularValues();
  return h;
}

DimensionReport nc_process_dimension(const NcOomModel& m, std::size_t max_level, double tol_rel, std::size_t jobs) {
  if (max_level < 1) throw ValidationError("max_level must be >= 1");
  const NcHankelBlock h = nc_hankel(m, max_level, max_level, jobs);
  return detail::rank_ladder(h.matrix, m.algebra().total_dim(), max_level, tol_rel);
}

NcOomModel nc_mixture_direct_sum(const std::vector<std::pair<double, NcOomModel>>& parts) {
  if (parts.empty()) throw ValidationError("mixture needs at least one part");
  const CStarAlgebra& alg = parts.front().second.algebra();
  double weight_sum = 0.0;
  Eigen::Index n = 0;
  for (const auto& [weight, model] : parts) {
    if (!(weight > 0.0)) throw ValidationError("mixture weights must be positive");
    if (!(model.algebra() == alg)) throw ValidationError("mixture parts must share one algebra");
    weight_sum += weight;
    n += static_cast<Eigen::Index>(model.dim());
  }
  if (std::abs(weight_sum - 1.0) > kConditionTol) {
    throw ValidationError("mixture weights sum to " + std::to_string(weight_sum) + ", expected 1");
  }
  std::vector<Eigen::MatrixXcd> ops(alg.total_dim(), Eigen::MatrixXcd::Zero(n, n));
  Eigen::VectorXcd init(n);
  Eigen::RowVectorXcd eval(n);
  Eigen::Index offset = 0;
  for (const auto& [weight, model] : parts) {
    const auto k = static_cast<Eigen::Index>(model.dim());
    for (std::size_t b = 0; b < alg.total_dim(); ++b) ops[b].block(offset, offset, k, k) = model.op_per_basis()[b];
    init.segment(offset, k) = weight * model.init();
    eval.segment(offset, k) = model.eval();
    offset += k;
  }
  return NcOomModel(alg, std::move(ops), std::move(init), std::move(eval));
}

NcStationarityReport nc_stationarity_check(const NcOomModel& m, std::size_t depth, std::size_t samples,
                                           std::uint64_t seed, OperatorOrder order) {
  NcStationarityReport r;
  r.depth = depth;
  r.samples = samples;
  r.seed = seed;
  const CStarAlgebra& alg = m.algebra();
  const std::vector<AlgebraElement> basis = basis_elements(alg);
  const AlgebraElement unit = unit_element(alg);
  const std::size_t k = alg.total_dim();
  if (count_words(k, 0, depth) > kMaxHankelEntries) {
    throw ResourceError("exhaustive translation check up to length " + std::to_string(depth) + " is too large");
  }
  auto shifted_defect = [&](const Tensor& t) {
    Tensor shifted;
    shifted.reserve(t.size() + 1);
    shifted.push_back(unit);
    shifted.insert(shifted.end(), t.begin(), t.end());
    return std::abs(nc_evaluate_ordered(m, shifted, order) - nc_evaluate_ordered(m, t, order));
  };
  for (const Word& w : enumerate_words(k, 0, depth)) {
    Tensor t;
    for (Symbol b : w) t.push_back(basis[b]);
    r.residual = std::max(r.residual, shifted_defect(t));
  }
  std::mt19937_64 gen(seed);
  for (std::size_t n = 1; n <= depth; ++n) {
    for (std::size_t s = 0; s < samples; ++s) {
      Tensor t;
      for (std::size_t i = 0; i < n; ++i) t.push_back(random_element(alg, gen));
      r.sampled_residual = std::max(r.sampled_residual, shifted_defect(t));
    }
  }
  r.stationary = r.residual <= r.tol && r.sampled_residual <= r.tol;
  return r;
}

}  // namespace oomlab
