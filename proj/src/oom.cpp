#include "oomlab/oom.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "oomlab/errors.hpp"

namespace oomlab {
namespace {

constexpr std::size_t kMaxEnumeratedWords = 10'000'000;

void check_word_budget(std::size_t k, std::size_t depth, std::size_t factor = 1) {
  const std::size_t n = count_words(k, 0, depth);
  if (n > kMaxEnumeratedWords / factor) {
    throw ResourceError("enumerating words up to length " + std::to_string(depth) + " exceeds the budget of " +
                        std::to_string(kMaxEnumeratedWords) + " evaluations");
  }
}

bool nonnegative(const Eigen::MatrixXd& m) { return m.size() == 0 || m.minCoeff() >= 0.0; }

// Depth-first walk over all words up to `depth`, carrying the state vector.
template <typename Visit>
void walk_states(const OomModel& m, const Eigen::VectorXd& x, Word& w, std::size_t depth, Visit&& visit) {
  visit(w, x);
  if (w.size() == depth) return;
  for (Symbol d = 0; d < m.alphabet().size(); ++d) {
    w.push_back(d);
    walk_states(m, m.op(d) * x, w, depth, visit);
    w.pop_back();
  }
}

}  // namespace

OomModel::OomModel(Alphabet alphabet, std::vector<Eigen::MatrixXd> operators, Eigen::VectorXd init,
                   Eigen::RowVectorXd eval)
    : alphabet_(std::move(alphabet)),
      operators_(std::move(operators)),
      init_(std::move(init)),
      eval_(std::move(eval)) {
  if (alphabet_.size() == 0) throw ValidationError("OOM alphabet must not be empty");
  const Eigen::Index n = init_.size();
  if (n < 1) throw ValidationError("OOM dimension must be >= 1");
  if (eval_.size() != n) throw ValidationError("eval has length " + std::to_string(eval_.size()) +
                                               ", expected " + std::to_string(n));
  if (operators_.size() != alphabet_.size()) {
    throw ValidationError("expected one operator per symbol (" + std::to_string(alphabet_.size()) + "), got " +
                          std::to_string(operators_.size()));
  }
  for (std::size_t d = 0; d < operators_.size(); ++d) {
    if (operators_[d].rows() != n || operators_[d].cols() != n) {
      throw ValidationError("operator for symbol '" + alphabet_.label(d) + "' must be " + std::to_string(n) + "x" +
                            std::to_string(n));
    }
  }
}

Eigen::MatrixXd OomModel::total_operator() const {
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(init_.size(), init_.size());
  for (const auto& t : operators_) sum += t;
  return sum;
}

Eigen::VectorXd OomModel::state(const Word& w) const {
  alphabet_.check(w);
  Eigen::VectorXd x = init_;
  for (Symbol d : w) x = operators_[d] * x;
  return x;
}

double OomModel::raw_probability(const Word& w) const { return eval_.dot(state(w)); }

bool OomModel::operator==(const OomModel& o) const {
  if (!(alphabet_ == o.alphabet_) || init_ != o.init_ || eval_ != o.eval_) return false;
  for (std::size_t d = 0; d < operators_.size(); ++d) {
    if (operators_[d] != o.operators_[d]) return false;
  }
  return true;
}

HmmModel::HmmModel(Alphabet alphabet, std::vector<Eigen::MatrixXd> transition_emission, Eigen::VectorXd init)
    : alphabet_(std::move(alphabet)), transition_emission_(std::move(transition_emission)), init_(std::move(init)) {
  const Eigen::Index n = init_.size();
  if (n < 1) throw ValidationError("HMM needs at least one state");
  if (transition_emission_.size() != alphabet_.size()) {
    throw ValidationError("expected one transition_emission matrix per symbol");
  }
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t d = 0; d < transition_emission_.size(); ++d) {
    const auto& m = transition_emission_[d];
    if (m.rows() != n || m.cols() != n) {
      throw ValidationError("transition_emission for symbol '" + alphabet_.label(d) + "' must be " +
                            std::to_string(n) + "x" + std::to_string(n));
    }
    if (!nonnegative(m)) throw ValidationError("transition_emission entries must be nonnegative");
    total += m;
  }
  const double row_defect = (total.rowwise().sum().array() - 1.0).abs().maxCoeff();
  if (row_defect > kConditionTol) {
    throw ValidationError("sum of transition_emission matrices is not row-stochastic (defect " +
                          std::to_string(row_defect) + ")");
  }
  if (init_.minCoeff() < 0.0 || std::abs(init_.sum() - 1.0) > kConditionTol) {
    throw ValidationError("HMM init must be a probability vector");
  }
}

bool HmmModel::operator==(const HmmModel& o) const {
  if (!(alphabet_ == o.alphabet_) || init_ != o.init_) return false;
  for (std::size_t d = 0; d < transition_emission_.size(); ++d) {
    if (transition_emission_[d] != o.transition_emission_[d]) return false;
  }
  return true;
}

ProcessOracle::ProcessOracle(Alphabet alphabet, Function probability)
    : alphabet_(std::move(alphabet)), probability_(std::move(probability)) {}

ProcessOracle::ProcessOracle(const OomModel& model, double neg_tol)
    : alphabet_(model.alphabet()), probability_([model, neg_tol](const Word& w) {
        return word_probability(model, w, neg_tol);
      }) {}

ProcessOracle::ProcessOracle(const HmmModel& model)
    : alphabet_(model.alphabet()), probability_([model](const Word& w) {
        model.alphabet().check(w);
        Eigen::RowVectorXd alpha = model.init().transpose();
        for (Symbol d : w) alpha = alpha * model.transition_emission()[d];
        return alpha.sum();
      }) {}

ProcessOracle ProcessOracle::from_table(Alphabet alphabet, std::map<Word, double> table) {
  Alphabet copy = alphabet;
  return ProcessOracle(std::move(alphabet), [table = std::move(table), copy](const Word& w) {
    auto it = table.find(w);
    if (it == table.end()) throw ValidationError("probability table has no entry for word '" + copy.format(w) + "'");
    return it->second;
  });
}

double ProcessOracle::operator()(const Word& w) const {
  alphabet_.check(w);
  return probability_(w);
}

ValidationReport validate_oom(const OomModel& m, std::size_t depth, double neg_tol) {
  check_word_budget(m.alphabet().size(), depth);
  ValidationReport r;
  r.depth = depth;
  r.neg_tol = neg_tol;
  r.init_residual = std::abs(m.eval().dot(m.init()) - 1.0);
  r.eval_residual = (m.eval() * m.total_operator() - m.eval()).cwiseAbs().maxCoeff();
  Word w;
  walk_states(m, m.init(), w, depth, [&](const Word& word, const Eigen::VectorXd& x) {
    const double p = m.eval().dot(x);
    if (p < r.min_probability) {
      r.min_probability = p;
      r.worst_word = word;
    }
  });
  r.passed = r.init_residual <= r.condition_tol && r.eval_residual <= r.condition_tol &&
             r.min_probability >= -neg_tol;
  return r;
}

double word_probability(const OomModel& m, const Word& w, double neg_tol) {
  const double p = m.raw_probability(w);
  if (p < -neg_tol) {
    throw InvalidModelError("word '" + m.alphabet().format(w) + "' has negative probability " + std::to_string(p));
  }
  return p < 0.0 ? 0.0 : p;
}

double word_probability(const ProcessOracle& p, const Word& w) { return p(w); }

OomModel hmm_to_oom(const HmmModel& h) {
  std::vector<Eigen::MatrixXd> ops;
  ops.reserve(h.transition_emission().size());
  for (const auto& m : h.transition_emission()) ops.push_back(m.transpose());
  const auto n = static_cast<Eigen::Index>(h.n_states());
  return OomModel(h.alphabet(), std::move(ops), h.init(), Eigen::RowVectorXd::Ones(n));
}

OomModel mixture_direct_sum(const std::vector<std::pair<double, OomModel>>& parts) {
  if (parts.empty()) throw ValidationError("mixture needs at least one part");
  const Alphabet& alphabet = parts.front().second.alphabet();
  double weight_sum = 0.0;
  Eigen::Index n = 0;
  for (const auto& [weight, model] : parts) {
    if (!(weight > 0.0)) throw ValidationError("mixture weights must be positive");
    if (!(model.alphabet() == alphabet)) throw ValidationError("mixture parts must share one alphabet");
    weight_sum += weight;
    n += static_cast<Eigen::Index>(model.dim());
  }
  if (std::abs(weight_sum - 1.0) > kConditionTol) {
    throw ValidationError("mixture weights sum to " + std::to_string(weight_sum) + ", expected 1");
  }
  std::vector<Eigen::MatrixXd> ops(alphabet.size(), Eigen::MatrixXd::Zero(n, n));
  Eigen::VectorXd init(n);
  Eigen::RowVectorXd eval(n);
  Eigen::Index offset = 0;
  for (const auto& [weight, model] : parts) {
    const auto k = static_cast<Eigen::Index>(model.dim());
    for (Symbol d = 0; d < alphabet.size(); ++d) ops[d].block(offset, offset, k, k) = model.op(d);
    init.segment(offset, k) = weight * model.init();
    eval.segment(offset, k) = model.eval();
    offset += k;
  }
  return OomModel(alphabet, std::move(ops), std::move(init), std::move(eval));
}

StationarityReport stationarity_check(const ProcessOracle& p, std::size_t depth) {
  const std::size_t k = p.alphabet().size();
  check_word_budget(k, depth, k + 1);
  StationarityReport r;
  r.depth = depth;
  for (const Word& w : enumerate_words(k, 0, depth)) {
    double shifted = 0.0;
    for (Symbol d = 0; d < k; ++d) shifted += p(concat(Word{d}, w));
    const double diff = std::abs(p(w) - shifted);
    if (diff > r.residual) {
      r.residual = diff;
      r.worst_word = w;
    }
  }
  r.stationary = r.residual <= r.tol;
  return r;
}

double kolmogorov_residual(const ProcessOracle& p, std::size_t depth) {
  const std::size_t k = p.alphabet().size();
  check_word_budget(k, depth, k + 1);
  double worst = std::abs(p(Word{}) - 1.0);
  for (const Word& w : enumerate_words(k, 0, depth)) {
    double extended = 0.0;
    for (Symbol d = 0; d < k; ++d) extended += p(concat(w, Word{d}));
    worst = std::max(worst, std::abs(extended - p(w)));
  }
  return worst;
}

Word sample_trajectory(const OomModel& m, std::size_t length, std::uint64_t seed, double neg_tol) {
  std::mt19937_64 gen(seed);
  const std::size_t k = m.alphabet().size();
  Word out;
  out.reserve(length);
  // x is the state after the sampled prefix, normalised so that ℓ(x) = 1.
  Eigen::VectorXd x = m.init();
  std::vector<double> cond(k);
  for (std::size_t step = 0; step < length; ++step) {
    double total = 0.0;
    for (Symbol d = 0; d < k; ++d) {
      double q = m.eval().dot(m.op(d) * x);
      if (q < -neg_tol) {
        throw InvalidModelError("negative conditional probability " + std::to_string(q) + " after prefix '" +
                                m.alphabet().format(out) + "'");
      }
      cond[d] = q < 0.0 ? 0.0 : q;
      total += cond[d];
    }
    if (!(total > 0.0)) throw InvalidModelError("prefix '" + m.alphabet().format(out) + "' has zero probability");
    // 53 random bits -> uniform in [0, 1)
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53 * total;
    Symbol pick = k - 1;
    double acc = 0.0;
    for (Symbol d = 0; d < k; ++d) {
      acc += cond[d];
      if (u < acc && cond[d] > 0.0) {
        pick = d;
        break;
      }
    }
    while (cond[pick] == 0.0 && pick > 0) --pick;
    out.push_back(pick);
    x = m.op(pick) * x / cond[pick];
  }
  return out;
}

OomModel bernoulli_oom(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("Bernoulli parameter must lie in [0, 1]");
  return OomModel(Alphabet({"0", "1"}), {Eigen::MatrixXd::Constant(1, 1, 1.0 - p), Eigen::MatrixXd::Constant(1, 1, p)},
                  Eigen::VectorXd::Ones(1), Eigen::RowVectorXd::Ones(1));
}

HmmModel markov_chain_hmm(Alphabet alphabet, const Eigen::MatrixXd& transition, Eigen::VectorXd init) {
  const auto n = static_cast<Eigen::Index>(alphabet.size());
  if (transition.rows() != n || transition.cols() != n) {
    throw ValidationError("Markov transition matrix must be square with one row per symbol");
  }
  std::vector<Eigen::MatrixXd> te(alphabet.size(), Eigen::MatrixXd::Zero(n, n));
  for (Eigen::Index d = 0; d < n; ++d) te[static_cast<std::size_t>(d)].col(d) = transition.col(d);
  return HmmModel(std::move(alphabet), std::move(te), std::move(init));
}

HmmModel cycle_hmm(Alphabet alphabet, Eigen::VectorXd init) {
  const auto n = static_cast<Eigen::Index>(alphabet.size());
  std::vector<Eigen::MatrixXd> te(alphabet.size(), Eigen::MatrixXd::Zero(n, n));
  for (Eigen::Index s = 0; s < n; ++s) te[static_cast<std::size_t>(s)](s, (s + 1) % n) = 1.0;
  return HmmModel(std::move(alphabet), std::move(te), std::move(init));
}

}  // namespace oomlab
