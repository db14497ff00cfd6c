#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fermiopt/algebra.hpp"
#include "fermiopt/repr.hpp"

namespace fermiopt {

// Real antisymmetric covariance, sigma_jk = E[i chi_j chi_k].
struct CovarianceMatrix {
  int n = 0;
  Eigen::MatrixXd sigma;

  // Throws InputError unless sigma is square and antisymmetric to 1e-12.
  static CovarianceMatrix from(const Eigen::MatrixXd& sigma);
  static CovarianceMatrix zero(int n);
  // Blocks (0, l; -l, 0) on index pairs (0,1), (2,3), ...
  static CovarianceMatrix blocks(const std::vector<double>& lambdas);
  double op_norm() const;
  bool is_state() const { return op_norm() <= 1.0 + 1e-10; }
};

// sigma = O^T Lambda O with Lambda = blockdiag((0, l_j; -l_j, 0)), l_j >= 0.
struct YoulaDecomposition {
  Eigen::MatrixXd o;
  std::vector<double> lambda;
};
YoulaDecomposition youla_decompose(const Eigen::MatrixXd& sigma);
Eigen::MatrixXd youla_compose(const YoulaDecomposition& y);

double pfaffian(const Eigen::MatrixXd& a);

// prod_j (1 + i l_j ell_{2j-1} ell_{2j}), trace normalized to 1 (matrix trace 2^{n/2}).
DenseOperator dense_gaussian_state(const CovarianceMatrix& cov, const GraphReduction& rep);

// E[chi^S] = i^{-binom(|S|,2)} Pf(sigma_SS).
cplx monomial_expectation(const CovarianceMatrix& cov, Support s);
// Expectation of the self-adjoint monomial u_S chi^S, u_S in {1, i}; real.
double wick_expectation(const CovarianceMatrix& cov, Support s);
cplx expectation(const CovarianceMatrix& cov, const Polynomial& h);
// Degree-4 homogeneous h (a constant term is allowed), three-pairing formula.
double expectation_deg4(const CovarianceMatrix& cov, const Polynomial& h);

struct QuadraticSolution {
  CovarianceMatrix cov;
  double opt_value = 0;
};
// h2 = sum_{j<k} i A_jk chi_j chi_k.
QuadraticSolution solve_quadratic_exact(const Polynomial& h2);
QuadraticSolution solve_quadratic_matrix(const Eigen::MatrixXd& a);
Eigen::MatrixXd quadratic_coefficients(const Polynomial& h2);

// n^2 x n^2, row index j*n + k pairs with sigma_jk.
Eigen::MatrixXd build_sdp_objective(const Polynomial& h);

struct SdpGaussSolution {
  int n = 0;
  Eigen::MatrixXd r;
  double objective = 0;
  double psd_min_eig = 0;
  double trace1_excess = 0;
  double trace2_excess = 0;
  double antisym_violation = 0;
  int iterations = 0;
  std::string status = "converged"; // converged | max_iter
};

SdpGaussSolution solve_sdp_gauss(const Polynomial& h, double tol = -1, int max_iter = 2000);

// Pre-truncation draw sigma * Mat(L x) with L = R^{1/2}.
Eigen::MatrixXd rounding_draw(const SdpGaussSolution& sol, double sigma, std::uint64_t seed, std::uint64_t trial);
// Drops the eigenvalues of i*sigma with modulus above 1.
Eigen::MatrixXd drop_large_modes(const Eigen::MatrixXd& sigma);

struct RoundingResult {
  CovarianceMatrix cov;
  double value = 0;
  double sigma = 0;
  int best_trial = -1;
};

RoundingResult round_to_gaussian(const SdpGaussSolution& sol, const Polynomial& h, std::optional<double> sigma_scale,
                                 int trials, std::uint64_t seed);

struct WitnessResult {
  CovarianceMatrix cov;
  double value = 0;
  double c = 0;
  double g1_norm = 0;
};

WitnessResult syk_gaussian_witness(const Polynomial& h);

struct LowRankTerm {
  double lambda = 0;
  Eigen::MatrixXd a; // real antisymmetric
};

struct LowRankResult {
  CovarianceMatrix cov;
  double value = 0;                 // true tr(rho p)
  double surrogate = 0;             // sum_a lambda_a t_a^2
  std::vector<double> history;      // surrogate per iteration of the winning start
  std::vector<LowRankTerm> normalized_terms;
};

// Terms are rescaled to unit Frobenius norm with the scale absorbed into lambda.
std::vector<LowRankTerm> normalize_terms(const std::vector<LowRankTerm>& terms);
Polynomial quadratic_form(const Eigen::MatrixXd& a);
Polynomial lowrank_polynomial(const std::vector<LowRankTerm>& terms);
LowRankResult lowrank_optimize(const std::vector<LowRankTerm>& terms);

} // namespace fermiopt
