#include <doctest.h>

#include <cmath>

#include "fermiopt/errors.hpp"
#include "fermiopt/repr.hpp"
#include "fermiopt/rng.hpp"
#include "fermiopt/syk.hpp"
#include "oracles.hpp"

using namespace fermiopt;

namespace {

void check_generators(const GraphReduction& rep, const AnticommGraph& g) {
  const Eigen::Index d = static_cast<Eigen::Index>(rep.dim());
  std::vector<CMatrix> gens;
  for (int j = 0; j < rep.n; ++j) gens.push_back(rep.generator_matrix(j));
  for (int j = 0; j < rep.n; ++j) {
    REQUIRE(oracle::max_abs(gens[j] - gens[j].adjoint()) <= 1e-12);
    REQUIRE(oracle::max_abs(gens[j] * gens[j] - CMatrix::Identity(d, d)) <= 1e-12);
    for (int k = j + 1; k < rep.n; ++k) {
      const double s = g.has_edge(j, k) ? 1.0 : -1.0;
      REQUIRE(oracle::max_abs(gens[j] * gens[k] + s * gens[k] * gens[j]) <= 1e-12);
    }
  }
}

Polynomial random_poly(int n, int max_deg, int terms, RngStream& rng) {
  Polynomial p(n);
  for (int t = 0; t < terms; ++t) {
    Support s = 0;
    for (int k = 0; k < max_deg; ++k)
      if (rng.bits() & 1) s |= Support{1} << (rng.bits() % n);
    p.add(s, cplx(rng.normal(), rng.normal()));
  }
  return p;
}

} // namespace

TEST_CASE("gamma matrices follow the Z-string convention") {
  GraphReduction r4 = build_gamma_representation(4);
  auto ref = oracle::gammas(4);
  for (int j = 0; j < 4; ++j) CHECK(oracle::max_abs(r4.generator_matrix(j) - ref[j]) == 0.0);
  CHECK(oracle::max_abs(r4.generator_matrix(0) - oracle::kron(oracle::pauli('X'), oracle::pauli('I'))) == 0.0);
  CHECK(oracle::max_abs(r4.generator_matrix(3) - oracle::kron(oracle::pauli('Z'), oracle::pauli('Y'))) == 0.0);

  GraphReduction r2 = build_gamma_representation(2);
  CMatrix prod = r2.generator_matrix(0) * r2.generator_matrix(1);
  CHECK(oracle::max_abs(prod - cplx(0, 1) * oracle::pauli('Z')) < 1e-15);

  GraphReduction r8 = build_gamma_representation(8);
  CHECK(r8.dim() == 16);
  check_generators(r8, AnticommGraph::complete(8));

  CHECK_THROWS_AS(build_gamma_representation(5), InputError);
  CHECK_THROWS_AS(build_gamma_representation(30), ResourceError);
}

TEST_CASE("F2 reduction dimensions and generator contract") {
  GraphReduction k2 = reduce_graph_f2(AnticommGraph::complete(2));
  CHECK(k2.r == 1);
  CHECK(k2.s == 0);
  CHECK(k2.dim() == 2);

  GraphReduction e3 = reduce_graph_f2(AnticommGraph::empty(3));
  CHECK(e3.r == 0);
  CHECK(e3.s == 3);
  CHECK(e3.dim() == 8);
  for (int j = 0; j < 3; ++j) {
    CMatrix m = e3.generator_matrix(j);
    CHECK(oracle::max_abs(m - CMatrix(m.diagonal().asDiagonal())) == 0.0);
  }

  GraphReduction c5 = reduce_graph_f2(AnticommGraph::cycle(5));
  CHECK(c5.r == 2);
  CHECK(c5.s == 1);
  CHECK(c5.dim() == 8);
  check_generators(c5, AnticommGraph::cycle(5));

  RngStream rng("f2", 7);
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + static_cast<int>(rng.bits() % 8);
    AnticommGraph g(n);
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (rng.bits() & 1) g.add_edge(a, b);
    GraphReduction rep = reduce_graph_f2(g);
    CHECK(rep.qubits == n - rep.r);
    CHECK(2 * rep.r + rep.s == n);
    check_generators(rep, g);
  }
}

TEST_CASE("C5 squares of linear forms have spectrum sigma +- 2 sqrt(tau)") {
  AnticommGraph c5 = AnticommGraph::cycle(5);
  GraphReduction rep = reduce_graph_f2(c5);
  RngStream rng("c5", 8);
  for (int t = 0; t < 10; ++t) {
    std::vector<double> a(5);
    for (double& x : a) x = rng.normal();
    Polynomial l = Polynomial::linear(a);
    Polynomial l2 = multiply(l, l, c5);
    EigenData e = eig_extremes(DenseOperator::hermitian_from(represent(l2, rep).mat), EigMode::full);
    double sigma = 0, tau = 0;
    for (double x : a) sigma += x * x;
    for (int j = 0; j < 5; ++j)
      for (int k = j + 1; k < 5; ++k)
        if (!c5.has_edge(j, k)) tau += a[j] * a[j] * a[k] * a[k];
    CHECK(e.lambda_max == doctest::Approx(sigma + 2 * std::sqrt(tau)).epsilon(1e-12));
    CHECK(e.lambda_min == doctest::Approx(sigma - 2 * std::sqrt(tau)).epsilon(1e-12));
    int top = 0;
    for (double v : e.spectrum) top += std::abs(v - e.lambda_max) < 1e-9;
    CHECK(top == 4);
  }
}

TEST_CASE("represent basics and homomorphism") {
  GraphReduction r2 = build_gamma_representation(2);
  CHECK(oracle::max_abs(represent(Polynomial::scalar(2, 1.0), r2).mat - CMatrix::Identity(2, 2)) == 0.0);
  CHECK(oracle::max_abs(represent(Polynomial::monomial(2, 3, cplx(0, 1)), r2).mat + oracle::pauli('Z')) < 1e-15);

  RngStream rng("hom", 9);
  GraphReduction r6 = build_gamma_representation(6);
  for (int t = 0; t < 10; ++t) {
    Polynomial h = random_poly(6, 6, 12, rng);
    CMatrix m = represent(h, r6).mat;
    CHECK(std::abs(m.trace() / static_cast<double>(m.rows()) - h.trace()) < 1e-10);
    CHECK(oracle::max_abs(m - oracle::dense(h, oracle::gammas(6))) < 1e-12);
  }
  for (int t = 0; t < 20; ++t) {
    const int n = 3 + static_cast<int>(rng.bits() % 6);
    AnticommGraph g(n);
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (rng.bits() & 1) g.add_edge(a, b);
    GraphReduction rep = reduce_graph_f2(g);
    Polynomial f = random_poly(n, 3, 6, rng), p = random_poly(n, 3, 6, rng);
    CHECK(oracle::max_abs(represent(multiply(f, p, g), rep).mat - represent(f, rep).mat * represent(p, rep).mat) < 1e-9);
  }
  CHECK_THROWS_AS(represent(Polynomial(4), r6), InputError);
}

TEST_CASE("extreme eigenvalues") {
  GraphReduction r8 = build_gamma_representation(8);
  EigenData e = eig_extremes(represent(square_hamiltonian(8), r8), EigMode::max);
  CHECK(e.lambda_max == doctest::Approx(16.0).epsilon(1e-12));

  DenseOperator z = DenseOperator::hermitian_from(oracle::pauli('Z'));
  EigenData ez = eig_extremes(z, EigMode::full);
  CHECK(ez.lambda_max == doctest::Approx(1.0));
  CHECK(ez.lambda_min == doctest::Approx(-1.0));

  std::vector<double> a{0.5, 0.5, 0.5, 0.5};
  GraphReduction r4 = build_gamma_representation(4);
  CHECK(opt_value(Polynomial::linear(a), r4) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(opt_pm(Polynomial::linear(a), r4) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(opt_pm(Polynomial(4), r4) == 0.0);

  CHECK_THROWS_AS(eig_extremes(DenseOperator::general(cplx(0, 1) * oracle::pauli('X')), EigMode::max), ContractError);

  SykInstance inst = sample_syk(12, 4, 1);
  GraphReduction r12 = build_gamma_representation(12);
  DenseOperator hd = represent(inst.h, r12);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hd.mat, Eigen::EigenvaluesOnly);
  const double norm = std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(es.eigenvalues().size() - 1)));
  CHECK(opt_pm(inst.h, r12) == doctest::Approx(norm).epsilon(1e-8));
  EigenData eh = eig_extremes(hd, EigMode::max);
  CHECK((hd.mat * eh.v_max - eh.lambda_max * eh.v_max).norm() <= 1e-9 * norm);

  Polynomial shifted = inst.h;
  shifted.add(0, 0.7);
  CHECK(opt_value(shifted, r12) == doctest::Approx(opt_value(inst.h, r12) + 0.7).epsilon(1e-12));
}

TEST_CASE("restarted Lanczos path matches dense eigensolve") {
  SykInstance inst = sample_syk(14, 4, 3);
  GraphReduction rep = build_gamma_representation(14);
  DenseOperator hd = represent(inst.h, rep);
  REQUIRE(hd.dim() == 128);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hd.mat, Eigen::EigenvaluesOnly);
  CHECK(opt_complete(inst.h) == doctest::Approx(es.eigenvalues().maxCoeff()).epsilon(1e-10));
  // Above dimension 64 the eigenvector comes from Lanczos.
  EigenData e = eig_extremes(hd, EigMode::max);
  CHECK(e.lambda_max == doctest::Approx(es.eigenvalues().maxCoeff()).epsilon(1e-12));
  CHECK((hd.mat * e.v_max - e.lambda_max * e.v_max).norm() <= 1e-9 * std::abs(e.lambda_max));
}

TEST_CASE("skew exponential conjugation") {
  RngStream rng("skew", 10);
  GraphReduction r6 = build_gamma_representation(6);
  Polynomial z(6);
  // i times self-adjoint degree-2 and degree-3 terms is skew.
  for (Support s : subsets_colex(6, 2)) z.add(s, rng.normal());
  for (Support s : subsets_colex(6, 3)) z.add(s, cplx(0, rng.normal()) * cplx(0, 1));
  DenseOperator zeta = DenseOperator::general(represent(z, r6).mat);
  CHECK(oracle::max_abs(zeta.mat + zeta.mat.adjoint()) < 1e-12);

  SykInstance inst = sample_syk(6, 2, 4);
  DenseOperator h = represent(inst.h, r6);
  CMatrix rho_m = CMatrix::Identity(8, 8) + 0.5 * h.mat / hermitian_norm(h.mat);
  DenseOperator rho = DenseOperator::hermitian_from(rho_m);

  DenseOperator same = skew_exponential_conjugate(zeta, 0.0, rho);
  CHECK(oracle::max_abs(same.mat - rho.mat) == 0.0);

  CMatrix u = skew_exponential(zeta, 0.3);
  CHECK(oracle::max_abs(u * u.adjoint() - CMatrix::Identity(8, 8)) < 1e-10);
  // Against a Taylor series of the exponential.
  CMatrix taylor = CMatrix::Identity(8, 8), term = CMatrix::Identity(8, 8);
  for (int k = 1; k < 60; ++k) {
    term = term * (-0.3 * zeta.mat) / static_cast<double>(k);
    taylor += term;
  }
  CHECK(oracle::max_abs(u - taylor) < 1e-10);

  const double theta = 0.01;
  DenseOperator out = skew_exponential_conjugate(zeta, theta, rho);
  CHECK(std::abs(out.mat.trace() - rho.mat.trace()) < 1e-10);
  CHECK(oracle::max_abs(out.mat - out.mat.adjoint()) < 1e-12);
  CMatrix c1 = zeta.mat * h.mat - h.mat * zeta.mat;
  CMatrix c2 = zeta.mat * c1 - c1 * zeta.mat;
  const double v = (out.mat * h.mat).trace().real(), v0 = (rho.mat * h.mat).trace().real();
  const double lin = (rho.mat * c1).trace().real();
  // Normalized traces; the operator-norm remainder bounds the normalized trace too.
  const double d = 8.0;
  CHECK(std::abs(v / d - v0 / d - theta * lin / d) <= 0.5 * theta * theta * hermitian_norm(0.5 * (c2 + c2.adjoint())));

  CHECK_THROWS_AS(skew_exponential(DenseOperator::general(h.mat), 0.1), ContractError);
}

TEST_CASE("irreducible block of a graph with central elements") {
  AnticommGraph g = AnticommGraph::cycle(5);
  GraphReduction rep = reduce_graph_f2(g);
  std::vector<double> a{1, 0, 1, 0, 0};
  Polynomial l = Polynomial::linear(a);
  CMatrix full = represent(multiply(l, l, g), rep).mat;
  CMatrix blk = irreducible_block(full, rep);
  CHECK(blk.rows() == 4);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(blk, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().maxCoeff() == doctest::Approx(4.0));
}
