#include "oomlab/causal.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "oomlab/errors.hpp"

namespace oomlab {
namespace {

void check_guard(std::size_t k, std::size_t len, const char* what) {
  if (count_words(k, len, len) > kMaxCausalWords) {
    throw ResourceError(std::string(what) + " of length " + std::to_string(len) + " exceeds " +
                        std::to_string(kMaxCausalWords) + " words");
  }
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  // The smaller index stays the root, so roots are first members.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

double total_variation(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  if (p.size() != q.size()) throw ValidationError("distributions have different lengths");
  return 0.5 * (p - q).cwiseAbs().sum();
}

PredictiveDistribution predictive_distribution(const ProcessOracle& p, const Word& past, std::size_t horizon) {
  const std::size_t k = p.alphabet().size();
  check_guard(k, horizon, "horizon");
  PredictiveDistribution out;
  out.past = past;
  out.horizon = horizon;
  out.weight = p(past);
  if (!(out.weight > 0.0)) {
    out.weight = 0.0;
    return out;
  }
  const std::vector<Word> futures = enumerate_words(k, horizon, horizon);
  out.dist.resize(static_cast<Eigen::Index>(futures.size()));
  for (std::size_t i = 0; i < futures.size(); ++i) {
    out.dist(static_cast<Eigen::Index>(i)) = p(concat(past, futures[i])) / out.weight;
  }
  out.defined = true;
  return out;
}

CausalStatePartition enumerate_causal_states(const ProcessOracle& p, std::size_t past_len, std::size_t horizon,
                                             double cluster_tol) {
  const std::size_t k = p.alphabet().size();
  check_guard(k, past_len, "past");
  check_guard(k, horizon, "horizon");

  std::vector<PredictiveDistribution> preds;
  for (const Word& past : enumerate_words(k, past_len, past_len)) {
    PredictiveDistribution d = predictive_distribution(p, past, horizon);
    if (d.defined) preds.push_back(std::move(d));
  }

  UnionFind uf(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    for (std::size_t j = i + 1; j < preds.size(); ++j) {
      if (total_variation(preds[i].dist, preds[j].dist) <= cluster_tol) uf.unite(i, j);
    }
  }

  CausalStatePartition c;
  c.past_len = past_len;
  c.horizon = horizon;
  c.cluster_tol = cluster_tol;
  std::vector<std::size_t> state_of_root(preds.size(), preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const std::size_t root = uf.find(i);
    if (state_of_root[root] == preds.size()) {
      state_of_root[root] = c.states.size();
      c.states.push_back({preds[root].dist, 0.0, {}});
    }
    CausalState& s = c.states[state_of_root[root]];
    s.weight += preds[i].weight;
    s.members.push_back(preds[i].past);
  }
  return c;
}

double statistical_complexity(const CausalStatePartition& c) {
  double h = 0.0;
  for (const auto& s : c.states) {
    if (s.weight > 0.0) h -= s.weight * std::log2(s.weight);
  }
  return h;
}

double topological_complexity(const CausalStatePartition& c) {
  if (c.states.empty()) throw ValidationError("partition has no causal states");
  return std::log2(static_cast<double>(c.states.size()));
}

std::size_t causal_span_rank(const CausalStatePartition& c, double tol_rel) {
  if (c.states.empty()) return 0;
  const auto cols = c.states.front().representative.size();
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(c.states.size()), cols);
  for (std::size_t i = 0; i < c.states.size(); ++i) {
    rows.row(static_cast<Eigen::Index>(i)) = c.states[i].representative.transpose();
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(rows);
  return numerical_rank(svd.singularValues(), tol_rel);
}

}  // namespace oomlab
