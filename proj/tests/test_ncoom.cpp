#include <doctest.h>

#include <cmath>

#include "oomlab/dimension.hpp"
#include "oomlab/errors.hpp"
#include "oomlab/ncoom.hpp"
#include "support/oracles.hpp"

using namespace oomlab;

namespace {

const CStarAlgebra kQubit({2});

// Product state of a density matrix ρ: T_a = [tr(ρ a)].
NcOomModel product_state(const Eigen::Matrix2cd& rho) {
  std::vector<Eigen::MatrixXcd> ops;
  for (const auto& e : basis_elements(kQubit)) ops.push_back(Eigen::MatrixXcd::Constant(1, 1, (rho * e.block(0)).trace()));
  return NcOomModel(kQubit, ops, Eigen::VectorXcd::Ones(1), Eigen::RowVectorXcd::Ones(1));
}

NcOomModel diag_state(double a, double b) {
  Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
  rho(0, 0) = a;
  rho(1, 1) = b;
  return product_state(rho);
}

AlgebraElement qubit(Complex a, Complex b, Complex c, Complex d) {
  Eigen::MatrixXcd m(2, 2);
  m << a, b, c, d;
  return AlgebraElement(kQubit, {m});
}

AlgebraElement pauli_z() { return qubit(1, 0, 0, -1); }

AlgebraElement indicator(const CStarAlgebra& alg, Symbol s) { return basis_elements(alg)[s]; }

AlgebraElement random_element(const CStarAlgebra& alg, std::mt19937_64& gen) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::VectorXcd c(static_cast<Eigen::Index>(alg.total_dim()));
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = Complex(n(gen), n(gen));
  return AlgebraElement::from_coefficients(alg, c);
}

std::vector<OomModel> classical_suite() {
  const Alphabet ab({"a", "b"});
  return {
      bernoulli_oom(0.3),
      hmm_to_oom(cycle_hmm(ab, Eigen::Vector2d(0.5, 0.5))),
      hmm_to_oom(oracle::random_hmm(2, 2, 1)),
      hmm_to_oom(oracle::random_hmm(3, 2, 2)),
      mixture_direct_sum({{0.5, bernoulli_oom(0.2)}, {0.5, bernoulli_oom(0.7)}}),
  };
}

}  // namespace

TEST_CASE("validate_ncoom") {
  const auto emb = embed_classical(bernoulli_oom(0.5));
  const auto r = validate_ncoom(emb);
  CHECK(r.passed);
  CHECK(r.init_residual == 0.0);
  CHECK(r.unit_residual == 0.0);

  CHECK(validate_ncoom(diag_state(0.8, 0.2)).passed);
  CHECK(validate_ncoom(product_state((Eigen::Matrix2cd() << 0.5, Complex(0, 0.3), Complex(0, -0.3), 0.5).finished()))
            .passed);
}

TEST_CASE("validate_ncoom: perturbing one operator shows up in condition 2") {
  const auto emb = embed_classical(bernoulli_oom(0.5));
  auto ops = emb.op_per_basis();
  ops[0](0, 0) += 0.01;
  const NcOomModel bad(emb.algebra(), ops, emb.init(), emb.eval());
  const auto r = validate_ncoom(bad);
  CHECK_FALSE(r.passed);
  CHECK(r.unit_residual == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("validate_ncoom: a non-positive functional is caught") {
  // tr(ρ a) with ρ = diag(1.2, -0.2) is not a state.
  const auto r = validate_ncoom(diag_state(1.2, -0.2), 2, 200, 3);
  CHECK(r.unit_residual <= 1e-15);
  CHECK_FALSE(r.passed);
  CHECK(r.worst_negative > 0.0);

  // Complex Hermitian-violating functional gives imaginary values on positive elements.
  const auto im = validate_ncoom(product_state((Eigen::Matrix2cd() << 0.5, 0.3, -0.3, 0.5).finished()), 1, 200, 3);
  CHECK_FALSE(im.passed);
  CHECK(im.worst_imaginary > 1e-9);
}

TEST_CASE("nc_evaluate on product states") {
  const auto m = diag_state(0.8, 0.2);
  const auto one = unit_element(kQubit);
  CHECK(std::abs(nc_evaluate(m, {one, one, one}) - 1.0) <= 1e-15);
  CHECK(std::abs(nc_evaluate(m, {}) - 1.0) == 0.0);
  CHECK(std::abs(nc_evaluate(m, {pauli_z(), pauli_z()}) - 0.36) <= 1e-15);
}

TEST_CASE("embedding commutes with evaluation on indicator tuples") {
  for (const auto& m : classical_suite()) {
    const auto emb = embed_classical(m);
    CHECK(emb.algebra() == CStarAlgebra::commutative(m.alphabet().size()));
    for (const auto& w : enumerate_words(m.alphabet().size(), 0, 5)) {
      Tensor t;
      for (Symbol s : w) t.push_back(indicator(emb.algebra(), s));
      const Complex v = nc_evaluate(emb, t);
      CHECK(std::abs(v - word_probability(m, w)) <= 1e-12);
      CHECK(std::abs(nc_evaluate_basis(emb, w) - word_probability(m, w)) <= 1e-12);
    }
  }
  const auto half = embed_classical(bernoulli_oom(0.5));
  const auto& alg = half.algebra();
  CHECK(std::abs(nc_evaluate(half, {indicator(alg, 1), indicator(alg, 0), indicator(alg, 1)}) - 0.125) <= 1e-15);
}

TEST_CASE("embedding: bilinear expansion of f ⊗ g") {
  const auto m = hmm_to_oom(oracle::random_hmm(3, 3, 8));
  const auto emb = embed_classical(m);
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXcd f(3), g(3);
    for (int i = 0; i < 3; ++i) {
      f(i) = u(gen);
      g(i) = u(gen);
    }
    Complex direct = 0.0;
    for (Symbol d = 0; d < 3; ++d) {
      for (Symbol e = 0; e < 3; ++e) direct += f(static_cast<Eigen::Index>(d)) * g(static_cast<Eigen::Index>(e)) *
                                               word_probability(m, Word{d, e});
    }
    const auto fa = AlgebraElement::from_coefficients(emb.algebra(), f);
    const auto ga = AlgebraElement::from_coefficients(emb.algebra(), g);
    CHECK(std::abs(nc_evaluate(emb, {fa, ga}) - direct) <= 1e-14);
  }
}

TEST_CASE("nc_evaluate is linear in each factor") {
  const auto m = nc_mixture_direct_sum({{0.5, diag_state(0.8, 0.2)}, {0.5, diag_state(0.3, 0.7)}});
  std::mt19937_64 gen(6);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_element(kQubit, gen);
    const auto b = random_element(kQubit, gen);
    const auto c = random_element(kQubit, gen);
    const auto x = random_element(kQubit, gen);
    const Complex s(0.3, -1.2);
    const Complex lhs = nc_evaluate(m, {a, b + s * x, c});
    const Complex rhs = nc_evaluate(m, {a, b, c}) + s * nc_evaluate(m, {a, x, c});
    CHECK(std::abs(lhs - rhs) <= 1e-12);
  }
}

TEST_CASE("self-adjoint tensors evaluate to real numbers in validated models") {
  const auto m = nc_mixture_direct_sum(
      {{0.5, product_state((Eigen::Matrix2cd() << 0.5, Complex(0, 0.3), Complex(0, -0.3), 0.5).finished())},
       {0.5, diag_state(0.9, 0.1)}});
  REQUIRE(validate_ncoom(m).passed);
  std::mt19937_64 gen(12);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_element(kQubit, gen);
    const auto b = random_element(kQubit, gen);
    const auto ha = a + a.adjoint();
    const auto hb = b + b.adjoint();
    CHECK(std::abs(nc_evaluate(m, {ha, hb}).imag()) <= 1e-12);
  }
}

TEST_CASE("nc_hankel") {
  const auto m = diag_state(0.8, 0.2);
  for (std::size_t level = 1; level <= 3; ++level) {
    const auto hb = nc_hankel(m, level, level);
    CHECK(hb.matrix(0, 0) == Complex(1.0));
    CHECK(numerical_rank(hb.singular_values) == 1);
  }
  for (const auto& c : classical_suite()) {
    const auto classical = build_hankel(c, 2, 2);
    const auto nc = nc_hankel(embed_classical(c), 2, 2);
    CHECK(numerical_rank(nc.singular_values) == numerical_rank(classical.singular_values));
  }
  const auto a = nc_hankel(embed_classical(classical_suite()[3]), 2, 2, 1);
  const auto b = nc_hankel(embed_classical(classical_suite()[3]), 2, 2, 3);
  CHECK(a.matrix == b.matrix);
}

TEST_CASE("nc_process_dimension") {
  CHECK(nc_process_dimension(diag_state(0.8, 0.2), 3).dimension == std::optional<std::size_t>(1));
  const auto mix = nc_mixture_direct_sum({{0.5, diag_state(0.8, 0.2)}, {0.5, diag_state(0.3, 0.7)}});
  CHECK(nc_process_dimension(mix, 3).dimension == std::optional<std::size_t>(2));

  for (const auto& m : classical_suite()) {
    const auto nc = nc_process_dimension(embed_classical(m), 4);
    CHECK(nc.monotone());
    CHECK(nc.dimension == process_dimension(m, 4).dimension);
  }

  const std::vector<double> ps{0.1, 0.4, 0.6, 0.9};
  for (std::size_t k = 1; k <= 4; ++k) {
    std::vector<std::pair<double, OomModel>> parts;
    for (std::size_t i = 0; i < k; ++i) parts.emplace_back(1.0 / static_cast<double>(k), bernoulli_oom(ps[i]));
    CHECK(nc_process_dimension(embed_classical(mixture_direct_sum(parts)), k + 1).dimension ==
          std::optional<std::size_t>(k));
  }
}

TEST_CASE("NC additivity over distinct qubit states") {
  const std::vector<NcOomModel> states{
      diag_state(0.8, 0.2), diag_state(0.3, 0.7),
      product_state((Eigen::Matrix2cd() << 0.5, Complex(0, 0.3), Complex(0, -0.3), 0.5).finished()),
      product_state((Eigen::Matrix2cd() << 0.6, 0.2, 0.2, 0.4).finished())};
  for (std::size_t k = 1; k <= 4; ++k) {
    std::vector<std::pair<double, NcOomModel>> parts;
    for (std::size_t i = 0; i < k; ++i) parts.emplace_back(1.0 / static_cast<double>(k), states[i]);
    const auto mix = nc_mixture_direct_sum(parts);
    CHECK(validate_ncoom(mix, 2, 50).passed);
    CHECK(nc_process_dimension(mix, 2).dimension == std::optional<std::size_t>(k));
  }
}

TEST_CASE("nc_mixture_direct_sum") {
  const auto a = diag_state(0.9, 0.1);
  const auto single = nc_mixture_direct_sum({{1.0, a}});
  std::mt19937_64 gen(4);
  for (int i = 0; i < 10; ++i) {
    const Tensor t{random_element(kQubit, gen), random_element(kQubit, gen)};
    CHECK(std::abs(nc_evaluate(single, t) - nc_evaluate(a, t)) <= 1e-15);
  }
  const auto mix = nc_mixture_direct_sum({{0.5, a}, {0.5, diag_state(0.3, 0.7)}});
  CHECK(std::abs(nc_evaluate(mix, {pauli_z()}) - 0.2) <= 1e-15);

  const std::vector<std::pair<double, NcOomModel>> parts{
      {0.2, a}, {0.3, diag_state(0.4, 0.6)}, {0.5, product_state((Eigen::Matrix2cd() << 0.6, 0.2, 0.2, 0.4).finished())}};
  const auto three = nc_mixture_direct_sum(parts);
  std::uniform_int_distribution<int> len(0, 4);
  for (int i = 0; i < 500; ++i) {
    Tensor t(static_cast<std::size_t>(len(gen)), unit_element(kQubit));
    for (auto& x : t) x = random_element(kQubit, gen);
    Complex direct = 0.0;
    for (const auto& [nu, part] : parts) direct += nu * nc_evaluate(part, t);
    CHECK(std::abs(nc_evaluate(three, t) - direct) <= 1e-12 * (1.0 + std::abs(direct)));
  }

  CHECK_THROWS_AS(nc_mixture_direct_sum({{0.5, a}, {0.4, a}}), ValidationError);
  CHECK_THROWS_AS(nc_mixture_direct_sum({{0.5, a}, {0.5, embed_classical(bernoulli_oom(0.5))}}), ValidationError);
}

TEST_CASE("nc_stationarity_check") {
  const auto p = nc_stationarity_check(diag_state(0.8, 0.2), 3);
  CHECK(p.stationary);
  CHECK(p.residual == 0.0);

  CHECK(nc_stationarity_check(embed_classical(hmm_to_oom(oracle::random_hmm(1, 2, 4))), 4).stationary);
  const Alphabet ab({"a", "b"});
  CHECK(nc_stationarity_check(embed_classical(hmm_to_oom(cycle_hmm(ab, Eigen::Vector2d(0.5, 0.5)))), 4).stationary);

  const auto cyc = hmm_to_oom(cycle_hmm(ab, Eigen::Vector2d(1, 0)));
  const auto off = nc_stationarity_check(embed_classical(cyc), 4);
  CHECK_FALSE(off.stationary);
  CHECK(off.residual == doctest::Approx(stationarity_check(cyc, 4).residual).epsilon(1e-12));
}

TEST_CASE("operator order matters") {
  const Alphabet abc({"a", "b", "c"});
  Eigen::Matrix3d t;
  t << 0.1, 0.8, 0.1, 0.1, 0.1, 0.8, 0.8, 0.1, 0.1;
  const auto m = hmm_to_oom(markov_chain_hmm(abc, t, Eigen::Vector3d::Constant(1.0 / 3)));
  const auto emb = embed_classical(m);
  const Word w = abc.parse("abc");
  Tensor tw;
  for (Symbol s : w) tw.push_back(indicator(emb.algebra(), s));
  const Word rev(w.rbegin(), w.rend());
  CHECK(std::abs(nc_evaluate_ordered(emb, tw, OperatorOrder::kForward) - word_probability(m, w)) <= 1e-15);
  CHECK(std::abs(nc_evaluate_ordered(emb, tw, OperatorOrder::kReverse) - word_probability(m, rev)) <= 1e-15);
  CHECK(std::abs(word_probability(m, w) - word_probability(m, rev)) > 0.1);

  // With T_1 applied last, ℓ ∘ T_1 = ℓ hides the defect of a non-stationary model.
  const auto cyc = embed_classical(hmm_to_oom(cycle_hmm(Alphabet({"a", "b"}), Eigen::Vector2d(1, 0))));
  CHECK_FALSE(nc_stationarity_check(cyc, 3, 10, 0, OperatorOrder::kForward).stationary);
  CHECK(nc_stationarity_check(cyc, 3, 10, 0, OperatorOrder::kReverse).stationary);
}

TEST_CASE("shape checks") {
  CHECK_THROWS(NcOomModel(kQubit, {Eigen::MatrixXcd::Identity(1, 1)}, Eigen::VectorXcd::Ones(1),
                          Eigen::RowVectorXcd::Ones(1)));
  CHECK_THROWS(nc_evaluate_basis(diag_state(0.5, 0.5), Word{4}));
  CHECK_THROWS(nc_evaluate(diag_state(0.5, 0.5), {unit_element(CStarAlgebra::commutative(2))}));
}
