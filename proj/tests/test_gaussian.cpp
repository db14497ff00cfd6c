#include <doctest.h>

#include <cmath>

#include "fermiopt/errors.hpp"
#include "fermiopt/gaussian.hpp"
#include "fermiopt/repr.hpp"
#include "fermiopt/rng.hpp"
#include "fermiopt/syk.hpp"

using namespace fermiopt;

namespace {

Eigen::MatrixXd random_orthogonal(int n, RngStream& rng) {
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  return qr.householderQ();
}

CovarianceMatrix random_state(int n, RngStream& rng) {
  YoulaDecomposition y{random_orthogonal(n, rng), {}};
  for (int j = 0; j < n / 2; ++j) y.lambda.push_back(2 * rng.uniform() - 1);
  return CovarianceMatrix::from(0.5 * (youla_compose(y) - youla_compose(y).transpose()));
}

Eigen::MatrixXd random_antisym(int n, RngStream& rng) {
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
  return a - a.transpose();
}

// (1/D) Tr(rho M) for a dense state of normalized trace 1.
cplx dense_expect(const DenseOperator& rho, const CMatrix& m) {
  return (rho.mat * m).trace() / static_cast<double>(rho.dim());
}

Polynomial random_quartic(int n, RngStream& rng) {
  Polynomial h(n);
  for (Support s : subsets_colex(n, 4)) h.add(s, rng.normal());
  return h;
}

} // namespace

TEST_CASE("Pfaffian squares to the determinant") {
  RngStream rng("pf", 1);
  for (int m : {2, 4, 6, 8, 10, 12}) {
    Eigen::MatrixXd a = random_antisym(m, rng);
    const double pf = pfaffian(a), det = a.determinant();
    CHECK(pf * pf == doctest::Approx(det).epsilon(1e-9));
  }
  CHECK(pfaffian(Eigen::MatrixXd::Zero(3, 3)) == 0.0);
  // Expansion (<= 8) and tridiagonalization (> 8) agree through a block extension.
  Eigen::MatrixXd a = random_antisym(8, rng);
  Eigen::MatrixXd big = Eigen::MatrixXd::Zero(10, 10);
  big.topLeftCorner(8, 8) = a;
  big(8, 9) = 1;
  big(9, 8) = -1;
  CHECK(pfaffian(big) == doctest::Approx(pfaffian(a)).epsilon(1e-10));
}

TEST_CASE("Youla decomposition round trip") {
  RngStream rng("youla", 2);
  for (int n : {2, 6, 10}) {
    Eigen::MatrixXd s = random_antisym(n, rng);
    YoulaDecomposition y = youla_decompose(s);
    CHECK((youla_compose(y) - s).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((y.o * y.o.transpose() - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
    for (double l : y.lambda) CHECK(l >= 0.0);
  }
}

TEST_CASE("dense Gaussian states") {
  GraphReduction rep = build_gamma_representation(6);
  DenseOperator zero = dense_gaussian_state(CovarianceMatrix::zero(6), rep);
  CHECK((zero.mat - CMatrix::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-14);

  // All-(-1) blocks give 2^{n/2}|0><0|.
  DenseOperator ket0 = dense_gaussian_state(CovarianceMatrix::blocks({-1, -1, -1}), rep);
  CMatrix want = CMatrix::Zero(8, 8);
  want(0, 0) = 8.0;
  CHECK((ket0.mat - want).cwiseAbs().maxCoeff() < 1e-12);

  RngStream rng("dense-gs", 3);
  for (int t = 0; t < 5; ++t) {
    CovarianceMatrix cov = random_state(6, rng);
    DenseOperator rho = dense_gaussian_state(cov, rep);
    CHECK(dense_expect(rho, CMatrix::Identity(8, 8)).real() == doctest::Approx(1.0));
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.mat);
    CHECK(es.eigenvalues()(0) >= -1e-10);
    for (int j = 0; j < 6; ++j)
      for (int k = j + 1; k < 6; ++k) {
        CMatrix m = cplx(0, 1) * rep.generator_matrix(j) * rep.generator_matrix(k);
        CHECK(std::abs(dense_expect(rho, m) - cov.sigma(j, k)) < 1e-10);
      }
  }
}

TEST_CASE("Wick expectations") {
  CovarianceMatrix b = CovarianceMatrix::blocks({1, 1});
  CHECK(wick_expectation(b, 0b1111) == doctest::Approx(-1.0));
  CHECK(wick_expectation(b, 0b0011) == doctest::Approx(1.0));
  CHECK(wick_expectation(b, 0b0111) == 0.0);

  RngStream rng("wick", 4);
  for (int n : {6, 8, 10}) {
    GraphReduction rep = build_gamma_representation(n);
    for (int t = 0; t < 3; ++t) {
      CovarianceMatrix cov = random_state(n, rng);
      DenseOperator rho = dense_gaussian_state(cov, rep);
      double worst = 0;
      for (int d = 2; d <= 6; d += 2)
        for (Support s : subsets_colex(n, d)) {
          const DenseOperator m = represent(Polynomial::monomial(n, s), rep);
          worst = std::max(worst, std::abs(dense_expect(rho, m.mat) - monomial_expectation(cov, s)));
        }
      CHECK(worst < 1e-9);
    }
  }
}

TEST_CASE("degree-4 expectation and the SDP objective matrix") {
  CHECK(expectation_deg4(CovarianceMatrix::blocks({1, 1, 1, 1}), square_hamiltonian(8) - Polynomial::scalar(8, 4.0)) ==
        doctest::Approx(12.0));
  CHECK(expectation(CovarianceMatrix::blocks({1, 1, 1, 1}), square_hamiltonian(8)).real() == doctest::Approx(16.0));
  RngStream rng("deg4", 5);
  Polynomial h = random_quartic(8, rng);
  CHECK(expectation_deg4(CovarianceMatrix::zero(8), h) == 0.0);
  GraphReduction rep = build_gamma_representation(8);
  const DenseOperator hd = represent(h, rep);
  const Eigen::MatrixXd hm = build_sdp_objective(h);
  CHECK((hm - hm.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  for (int t = 0; t < 20; ++t) {
    CovarianceMatrix cov = random_state(8, rng);
    const double e = expectation_deg4(cov, h);
    CHECK(e == doctest::Approx(dense_expect(dense_gaussian_state(cov, rep), hd.mat).real()).epsilon(1e-9));
    Eigen::Map<const Eigen::VectorXd> v(cov.sigma.data(), 64);
    // sigma is antisymmetric, so the column-major map is Vec up to a global sign.
    CHECK(v.dot(hm * v) == doctest::Approx(e).epsilon(1e-10));
  }

  Polynomial single = Polynomial::monomial(6, 0b1111, 1.0);
  const Eigen::MatrixXd hs = build_sdp_objective(single);
  CHECK((hs.array() != 0.0).count() == 6);
  CHECK_THROWS_AS(expectation_deg4(CovarianceMatrix::zero(6), Polynomial::monomial(6, 0b11, 1.0)), InputError);
}

TEST_CASE("exact quadratic optimization") {
  Polynomial chain(8);
  for (int j = 0; j + 1 < 8; ++j) chain.add(Support{3} << j, cplx(0, -1));
  CHECK(solve_quadratic_exact(chain).opt_value == doctest::Approx(opt_complete(chain)).epsilon(1e-9));

  Polynomial pairs(8);
  for (int j = 0; j < 8; j += 2) pairs.add(Support{3} << j, cplx(0, -1));
  CHECK(solve_quadratic_exact(pairs).opt_value == doctest::Approx(4.0));

  QuadraticSolution one = solve_quadratic_exact(Polynomial::monomial(4, 0b11, cplx(0, 1)));
  CHECK(one.opt_value == doctest::Approx(1.0));
  CHECK(expectation(one.cov, Polynomial::monomial(4, 0b11, cplx(0, 1))).real() == doctest::Approx(1.0));

  RngStream rng("quad", 6);
  Eigen::MatrixXd a = random_antisym(10, rng);
  QuadraticSolution s = solve_quadratic_matrix(a);
  Polynomial q = quadratic_form(a);
  CHECK(s.opt_value == doctest::Approx(opt_complete(q)).epsilon(1e-9));
  CHECK(expectation(s.cov, q).real() == doctest::Approx(s.opt_value).epsilon(1e-9));
  CHECK(s.cov.is_state());

  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(4, 4);
  CHECK_THROWS_AS(solve_quadratic_matrix(bad), InputError);
}

TEST_CASE("SDP relaxation, rounding and witness") {
  Polynomial h1 = extremal_quartic(12);
  SdpGaussSolution sol = solve_sdp_gauss(h1, -1, 2000);
  CHECK(sol.objective >= std::sqrt(15.0) - 1e-4);
  CHECK(sol.psd_min_eig >= -1e-7);
  CHECK(sol.trace1_excess <= 1e-7);
  CHECK(sol.trace2_excess <= 1e-7);
  CHECK(sol.antisym_violation <= 1e-9);

  RoundingResult rr = round_to_gaussian(sol, h1, std::nullopt, 20, 1);
  CHECK(rr.cov.is_state());
  CHECK(rr.value >= 0.1 * sol.objective);
  CHECK(rr.value <= opt_complete(h1) + 1e-7);

  SdpGaussSolution z = solve_sdp_gauss(Polynomial(8), -1, 50);
  CHECK(z.objective == doctest::Approx(0.0));

  SykInstance inst = sample_syk(16, 4, 1);
  WitnessResult w = syk_gaussian_witness(inst.h);
  CHECK(w.cov.is_state());
  CHECK(w.value >= 0.05);
  CHECK(w.value <= 3.0);
  CHECK(w.value <= opt_complete(inst.h) + 1e-7);
  CHECK_THROWS_AS(syk_gaussian_witness(sample_syk(10, 4, 1).h), InputError);
}

TEST_CASE("rounding draws have second moment sigma^2 R") {
  SykInstance inst = sample_syk(8, 4, 3);
  SdpGaussSolution sol = solve_sdp_gauss(inst.h, -1, 400);
  const double sigma = 0.4;
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(64, 64);
  const int trials = 2000;
  for (int t = 0; t < trials; ++t) {
    Eigen::MatrixXd s = rounding_draw(sol, sigma, 9, static_cast<std::uint64_t>(t));
    Eigen::VectorXd v(64);
    for (int j = 0; j < 8; ++j)
      for (int k = 0; k < 8; ++k) v(j * 8 + k) = s(j, k);
    acc += v * v.transpose();
  }
  acc /= trials;
  const Eigen::MatrixXd want = sigma * sigma * sol.r;
  CHECK((acc - want).norm() <= 0.05 * want.norm());

  RngStream rng("drop", 7);
  CovarianceMatrix small = random_state(8, rng);
  CHECK((drop_large_modes(small.sigma) - small.sigma).cwiseAbs().maxCoeff() == 0.0);
  CHECK(CovarianceMatrix::from(drop_large_modes(3.0 * small.sigma)).is_state());
}

TEST_CASE("low-rank optimization") {
  for (int n : {6, 8}) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; j += 2) {
      a(j, j + 1) = 1;
      a(j + 1, j) = -1;
    }
    LowRankResult r = lowrank_optimize({{1.0, a}});
    CHECK(r.value == doctest::Approx((n / 2.0) * (n / 2.0)).epsilon(1e-9));
    for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] >= r.history[i - 1]);
    CHECK(r.normalized_terms[0].lambda == doctest::Approx(n));

    LowRankResult neg = lowrank_optimize({{-1.0, a}});
    CHECK(neg.cov.sigma.cwiseAbs().maxCoeff() == 0.0);
    // At sigma = 0 only the scalar part of -Q^2 survives.
    CHECK(neg.value == doctest::Approx(lowrank_polynomial(neg.normalized_terms).trace().real()));
  }
  CHECK(lowrank_optimize({}).value == 0.0);

  RngStream rng("lowrank", 8);
  std::vector<LowRankTerm> terms;
  for (int k = 0; k < 3; ++k) {
    Eigen::MatrixXd a = random_antisym(10, rng);
    terms.push_back({rng.normal() / 3, a / a.norm()});
  }
  LowRankResult r = lowrank_optimize(terms);
  const double opt = opt_complete(lowrank_polynomial(r.normalized_terms));
  CHECK(r.value <= opt + 1e-7);
  CHECK(r.cov.is_state());
  MESSAGE("low-rank gap at n=10: " << opt - r.value);
  for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] >= r.history[i - 1]);

  Eigen::MatrixXd nonanti = Eigen::MatrixXd::Identity(4, 4);
  CHECK_THROWS_AS(lowrank_optimize({{1.0, nonanti}}), InputError);
}
