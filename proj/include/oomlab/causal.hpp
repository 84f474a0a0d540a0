#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "oomlab/dimension.hpp"
#include "oomlab/oom.hpp"

namespace oomlab {

inline constexpr std::size_t kMaxCausalWords = 100'000;
inline constexpr double kDefaultClusterTol = 1e-8;

/// Conditional distribution of the next `horizon` symbols given a finite past.
struct PredictiveDistribution {
  Word past;
  std::size_t horizon = 0;
  double weight = 0.0;   // P([past])
  bool defined = false;  // false iff weight == 0; dist is then empty
  Eigen::VectorXd dist;  // indexed by future words of length `horizon`, lexicographic
};

struct CausalState {
  Eigen::VectorXd representative;  // predictive distribution of the first member
  double weight = 0.0;
  std::vector<Word> members;
};

/// Finite-horizon surrogate for the causal state distribution: pasts of length
/// exactly past_len, grouped by their predictive distributions.
struct CausalStatePartition {
  std::size_t past_len = 0;
  std::size_t horizon = 0;
  double cluster_tol = kDefaultClusterTol;
  std::vector<CausalState> states;
};

/// Total-variation distance ½ Σ |p_i - q_i|.
double total_variation(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

/// Throws ResourceError if |Δ|^horizon > kMaxCausalWords.
PredictiveDistribution predictive_distribution(const ProcessOracle& p, const Word& past, std::size_t horizon);

/// Single-linkage clustering (union-find) of all pasts with positive probability,
/// joining pasts whose predictive distributions are within cluster_tol in total
/// variation. Clusters are ordered by their first member.
CausalStatePartition enumerate_causal_states(const ProcessOracle& p, std::size_t past_len, std::size_t horizon,
                                             double cluster_tol = kDefaultClusterTol);

/// Shannon entropy of the state weights, in bits.
double statistical_complexity(const CausalStatePartition& c);

/// log2 of the number of states. Throws ValidationError for an empty partition.
double topological_complexity(const CausalStatePartition& c);

/// Numerical rank of the matrix whose rows are the representatives.
std::size_t causal_span_rank(const CausalStatePartition& c, double tol_rel = kDefaultRankTol);

}  // namespace oomlab
