#include "oomlab/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "oomlab/errors.hpp"
#include "parallel.hpp"

namespace oomlab {
namespace {

template <typename Matrix>
Eigen::VectorXd singular_values_of(const Matrix& m) {
  if (m.size() == 0) return Eigen::VectorXd();
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues();
}

// Orthonormal basis grown by classical Gram-Schmidt with one re-orthogonalisation pass.
class SpanBuilder {
 public:
  SpanBuilder(Eigen::Index ambient, double threshold) : ambient_(ambient), threshold_(threshold) {}

  // Adds the component of x orthogonal to the current span if it is larger than the threshold.
  bool add(const Eigen::VectorXd& x) {
    if (static_cast<Eigen::Index>(basis_.size()) == ambient_) return false;
    Eigen::VectorXd r = x;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis_) r -= q.dot(r) * q;
    }
    const double norm = r.norm();
    if (!(norm > threshold_)) return false;
    basis_.push_back(r / norm);
    return true;
  }

  const std::vector<Eigen::VectorXd>& basis() const { return basis_; }

  // Basis vectors as columns.
  Eigen::MatrixXd matrix() const {
    Eigen::MatrixXd q(ambient_, static_cast<Eigen::Index>(basis_.size()));
    for (std::size_t i = 0; i < basis_.size(); ++i) q.col(static_cast<Eigen::Index>(i)) = basis_[i];
    return q;
  }

 private:
  Eigen::Index ambient_;
  double threshold_;
  std::vector<Eigen::VectorXd> basis_;
};

// Breadth-first closure of span{start} under the maps x -> step(d, x).
template <typename Step>
Eigen::MatrixXd invariant_span(const Eigen::VectorXd& start, std::size_t num_symbols, double threshold,
                               std::size_t max_depth, Step&& step) {
  SpanBuilder span(start.size(), threshold);
  struct Pending {
    Eigen::VectorXd vec;
    std::size_t depth;
  };
  std::deque<Pending> queue;
  queue.push_back({start, 0});
  while (!queue.empty()) {
    Pending next = std::move(queue.front());
    queue.pop_front();
    if (!span.add(next.vec)) continue;
    if (next.depth > max_depth) {
      throw Error("span did not stabilise within depth " + std::to_string(max_depth));
    }
    const Eigen::VectorXd& q = span.basis().back();
    for (Symbol d = 0; d < num_symbols; ++d) queue.push_back({step(d, q), next.depth + 1});
  }
  return span.matrix();
}

}  // namespace

bool DimensionReport::monotone() const {
  std::size_t prev = 0;
  for (const auto& [level, rank] : rank_by_level) {
    if (rank < prev) return false;
    prev = rank;
  }
  return true;
}

Eigen::VectorXd apply_tau(const OomModel& m, const Word& w) { return m.state(w); }

namespace detail {

std::size_t hankel_side(std::size_t alphabet_size, std::size_t len) { return count_words(alphabet_size, 0, len); }

template <typename Matrix>
DimensionReport rank_ladder(const Matrix& full, std::size_t alphabet_size, std::size_t max_level, double tol_rel) {
  DimensionReport r;
  r.tol_rel = tol_rel;
  for (std::size_t level = 1; level <= max_level; ++level) {
    const auto side = static_cast<Eigen::Index>(hankel_side(alphabet_size, level));
    const Matrix block = full.topLeftCorner(side, side);
    r.rank_by_level[level] = numerical_rank(singular_values_of(block), tol_rel);
  }
  const std::size_t last = r.rank_by_level.at(max_level);
  r.stable_from = max_level;
  while (r.stable_from > 1 && r.rank_by_level.at(r.stable_from - 1) == last) --r.stable_from;
  r.stabilized = max_level >= 2 && r.rank_by_level.at(max_level - 1) == last;
  if (r.stabilized) r.dimension = last;
  return r;
}

template DimensionReport rank_ladder<Eigen::MatrixXd>(const Eigen::MatrixXd&, std::size_t, std::size_t, double);
template DimensionReport rank_ladder<Eigen::MatrixXcd>(const Eigen::MatrixXcd&, std::size_t, std::size_t, double);

}  // namespace detail

HankelBlock build_hankel(const ProcessOracle& p, std::size_t past_len, std::size_t future_len, std::size_t jobs) {
  const std::size_t k = p.alphabet().size();
  const std::size_t rows = count_words(k, 0, past_len);
  const std::size_t cols = count_words(k, 0, future_len);
  if (rows > kMaxHankelEntries || cols > kMaxHankelEntries / rows) {
    throw ResourceError("Hankel block " + std::to_string(rows) + "x" + std::to_string(cols) + " exceeds " +
                        std::to_string(kMaxHankelEntries) + " entries");
  }
  HankelBlock h;
  h.pasts = enumerate_words(k, 0, past_len);
  h.futures = enumerate_words(k, 0, future_len);
  h.matrix.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  detail::parallel_for(rows, jobs, [&](std::size_t i) {
    for (std::size_t j = 0; j < cols; ++j) {
      h.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = p(concat(h.pasts[i], h.futures[j]));
    }
  });
  h.singular_values = singular_values_of(h.matrix);
  return h;
}

std::size_t numerical_rank(const Eigen::VectorXd& singular_values, double tol_rel) {
  if (singular_values.size() == 0) return 0;
  const double top = singular_values.maxCoeff();
  if (!(top > 0.0)) return 0;
  const double cutoff = tol_rel * top;
  return static_cast<std::size_t>((singular_values.array() > cutoff).count());
}

DimensionReport process_dimension(const ProcessOracle& p, std::size_t max_level, double tol_rel, std::size_t jobs) {
  if (max_level < 1) throw ValidationError("max_level must be >= 1");
  const HankelBlock h = build_hankel(p, max_level, max_level, jobs);
  return detail::rank_ladder(h.matrix, p.alphabet().size(), max_level, tol_rel);
}

OomModel minimize_oom(const OomModel& m, double tol_rel) {
  const std::size_t k = m.alphabet().size();
  double scale = 1.0;
  for (const auto& t : m.operators()) scale = std::max(scale, t.norm());
  const double threshold = tol_rel * std::max(scale, m.init().norm());

  // Reachable part: columns of q span {T_w v}.
  const Eigen::MatrixXd q = invariant_span(m.init(), k, threshold, m.dim(),
                                           [&](Symbol d, const Eigen::VectorXd& x) { return Eigen::VectorXd(m.op(d) * x); });
  std::vector<Eigen::MatrixXd> reach_ops;
  for (const auto& t : m.operators()) reach_ops.push_back(q.transpose() * t * q);
  const Eigen::VectorXd reach_init = q.transpose() * m.init();
  const Eigen::RowVectorXd reach_eval = m.eval() * q;

  // Observable part: rows of r span {ℓ T_w} on the reachable space.
  const double obs_threshold = tol_rel * std::max(scale, reach_eval.norm());
  const Eigen::MatrixXd r =
      invariant_span(reach_eval.transpose(), k, obs_threshold, static_cast<std::size_t>(q.cols()),
                     [&](Symbol d, const Eigen::VectorXd& y) {
                       return Eigen::VectorXd(reach_ops[d].transpose() * y);
                     })
          .transpose();
  std::vector<Eigen::MatrixXd> ops;
  for (const auto& t : reach_ops) ops.push_back(r * t * r.transpose());
  return OomModel(m.alphabet(), std::move(ops), r * reach_init, reach_eval * r.transpose());
}

double max_word_deviation(const OomModel& a, const OomModel& b, std::size_t max_len) {
  if (!(a.alphabet() == b.alphabet())) throw ValidationError("models have different alphabets");
  const std::size_t k = a.alphabet().size();
  if (count_words(k, 0, max_len) > 100'000'000) {
    throw ResourceError("equivalence check up to length " + std::to_string(max_len) + " is too large");
  }
  double worst = 0.0;
  // Depth-first over words, carrying both state vectors.
  struct Frame {
    Eigen::VectorXd x;
    Eigen::VectorXd y;
    std::size_t len;
  };
  std::vector<Frame> stack{{a.init(), b.init(), 0}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    worst = std::max(worst, std::abs(a.eval().dot(f.x) - b.eval().dot(f.y)));
    if (f.len == max_len) continue;
    for (Symbol d = 0; d < k; ++d) stack.push_back({a.op(d) * f.x, b.op(d) * f.y, f.len + 1});
  }
  return worst;
}

bool equivalent(const OomModel& a, const OomModel& b, std::size_t max_len, double tol) {
  return max_word_deviation(a, b, max_len) <= tol;
}

}  // namespace oomlab
