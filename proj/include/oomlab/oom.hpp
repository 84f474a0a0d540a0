#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "oomlab/words.hpp"

namespace oomlab {

inline constexpr double kConditionTol = 1e-12;
inline constexpr double kDefaultNegTol = 1e-10;
inline constexpr std::size_t kDefaultValidationDepth = 8;

/// Classical observable operator model (V, T, v, ℓ) with V = R^dim.
///
/// Operators act on column vectors and ℓ is a row covector. A word d_1...d_n
/// has probability ℓ T_{d_n} ... T_{d_1} v, so the first symbol is applied first.
/// The constructor only checks shapes; use validate_oom for the model conditions.
class OomModel {
 public:
  OomModel(Alphabet alphabet, std::vector<Eigen::MatrixXd> operators, Eigen::VectorXd init,
           Eigen::RowVectorXd eval);

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t dim() const { return static_cast<std::size_t>(init_.size()); }
  const std::vector<Eigen::MatrixXd>& operators() const { return operators_; }
  const Eigen::MatrixXd& op(Symbol s) const { return operators_.at(s); }
  const Eigen::VectorXd& init() const { return init_; }
  const Eigen::RowVectorXd& eval() const { return eval_; }

  /// Σ_d T_d.
  Eigen::MatrixXd total_operator() const;

  /// T_{w_n} ... T_{w_1} v.
  Eigen::VectorXd state(const Word& w) const;

  /// ℓ(state(w)) without clamping or sign checks.
  double raw_probability(const Word& w) const;

  bool operator==(const OomModel&) const;

 private:
  Alphabet alphabet_;
  std::vector<Eigen::MatrixXd> operators_;
  Eigen::VectorXd init_;
  Eigen::RowVectorXd eval_;
};

/// Hidden Markov model with joint transition/emission matrices:
/// M_d(i, j) = P(next state j, output d | state i).
class HmmModel {
 public:
  /// Throws ValidationError unless entries are nonnegative, Σ_d M_d is
  /// row-stochastic within kConditionTol and init is a probability vector.
  HmmModel(Alphabet alphabet, std::vector<Eigen::MatrixXd> transition_emission, Eigen::VectorXd init);

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t n_states() const { return static_cast<std::size_t>(init_.size()); }
  const std::vector<Eigen::MatrixXd>& transition_emission() const { return transition_emission_; }
  const Eigen::VectorXd& init() const { return init_; }

  bool operator==(const HmmModel&) const;

 private:
  Alphabet alphabet_;
  std::vector<Eigen::MatrixXd> transition_emission_;
  Eigen::VectorXd init_;
};

/// A process given only through its cylinder probabilities w ↦ P([w]).
/// The function must be pure; Hankel fills may call it from several threads.
class ProcessOracle {
 public:
  using Function = std::function<double(const Word&)>;

  ProcessOracle(Alphabet alphabet, Function probability);
  /// Clamps values in [-neg_tol, 0) to 0, throws InvalidModelError below.
  ProcessOracle(const OomModel& model, double neg_tol = kDefaultNegTol);  // NOLINT(google-explicit-constructor)
  ProcessOracle(const HmmModel& model);                                    // NOLINT(google-explicit-constructor)

  /// Explicit probability table. Looking up a missing word throws ValidationError.
  static ProcessOracle from_table(Alphabet alphabet, std::map<Word, double> table);

  const Alphabet& alphabet() const { return alphabet_; }
  double operator()(const Word& w) const;

 private:
  Alphabet alphabet_;
  Function probability_;
};

struct ValidationReport {
  double init_residual = 0.0;   // |ℓ(v) - 1|
  double eval_residual = 0.0;   // ‖ℓ Σ_d T_d - ℓ‖_∞
  double min_probability = 1.0; // smallest raw word probability, |w| <= depth
  Word worst_word;
  std::size_t depth = 0;
  double neg_tol = kDefaultNegTol;
  double condition_tol = kConditionTol;
  bool passed = false;
};

/// Checks the three OOM conditions; the third one only for words up to `depth`,
/// so a pass is necessary but not sufficient.
ValidationReport validate_oom(const OomModel& m, std::size_t depth = kDefaultValidationDepth,
                              double neg_tol = kDefaultNegTol);

/// ℓ T_{w_n} ... T_{w_1} v, clamped to 0 in [-neg_tol, 0).
/// Throws UnknownSymbolError or InvalidModelError (value below -neg_tol).
double word_probability(const OomModel& m, const Word& w, double neg_tol = kDefaultNegTol);
double word_probability(const ProcessOracle& p, const Word& w);

/// T_d = M_dᵀ, v = init, ℓ = (1, ..., 1).
OomModel hmm_to_oom(const HmmModel& h);

/// Block-diagonal direct sum generating Σ_k ν_k P_k.
/// Throws ValidationError on non-positive weights, weights not summing to 1
/// within kConditionTol, or differing alphabets.
OomModel mixture_direct_sum(const std::vector<std::pair<double, OomModel>>& parts);

struct StationarityReport {
  double residual = 0.0;  // max_{|w| <= depth} |P(w) - Σ_d P(dw)|
  Word worst_word;
  std::size_t depth = 0;
  double tol = 1e-10;
  bool stationary = false;
};

StationarityReport stationarity_check(const ProcessOracle& p, std::size_t depth);

/// max over |w| <= depth of |Σ_d P(wd) - P(w)|, including |P(ε) - 1|.
double kolmogorov_residual(const ProcessOracle& p, std::size_t depth);

/// Draws a word symbol by symbol from P(d | w) = P(wd) / P(w). Deterministic given seed.
Word sample_trajectory(const OomModel& m, std::size_t length, std::uint64_t seed,
                       double neg_tol = kDefaultNegTol);

// Small constructors used by tests, fixtures and experiment families.

/// i.i.d. process on {"0","1"} with P(1) = p.
OomModel bernoulli_oom(double p);

/// Markov chain whose output is the state it moves to. `transition` is row-stochastic.
HmmModel markov_chain_hmm(Alphabet alphabet, const Eigen::MatrixXd& transition, Eigen::VectorXd init);

/// Deterministic cycle over the alphabet: state k emits symbol k and moves to k+1 mod n.
HmmModel cycle_hmm(Alphabet alphabet, Eigen::VectorXd init);

}  // namespace oomlab
