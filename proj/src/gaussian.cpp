#include "fermiopt/gaussian.hpp"

#include <algorithm>
#include <cmath>

#include "fermiopt/errors.hpp"
#include "fermiopt/kernels.hpp"
#include "fermiopt/rng.hpp"

namespace fermiopt {

CovarianceMatrix CovarianceMatrix::from(const Eigen::MatrixXd& sigma) {
  if (sigma.rows() != sigma.cols()) throw InputError("covariance must be square");
  if (sigma.rows() > 0 && (sigma + sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw InputError("covariance must be antisymmetric");
  return {static_cast<int>(sigma.rows()), sigma};
}

CovarianceMatrix CovarianceMatrix::zero(int n) { return {n, Eigen::MatrixXd::Zero(n, n)}; }

CovarianceMatrix CovarianceMatrix::blocks(const std::vector<double>& lambdas) {
  const int n = 2 * static_cast<int>(lambdas.size());
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t j = 0; j < lambdas.size(); ++j) {
    s(2 * j, 2 * j + 1) = lambdas[j];
    s(2 * j + 1, 2 * j) = -lambdas[j];
  }
  return {n, s};
}

double CovarianceMatrix::op_norm() const {
  if (n == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sigma);
  return svd.singularValues()(0);
}

YoulaDecomposition youla_decompose(const Eigen::MatrixXd& sigma) {
  const int n = static_cast<int>(sigma.rows());
  if (n % 2) throw InputError("Youla decomposition needs even dimension");
  const Eigen::MatrixXd sq = sigma.transpose() * sigma;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sq);
  const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
  std::vector<Eigen::VectorXd> chosen;
  YoulaDecomposition out;
  out.o = Eigen::MatrixXd::Zero(n, n);
  auto orthogonalize = [&](Eigen::VectorXd v) {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& c : chosen) v -= c.dot(v) * c;
    return v;
  };
  std::vector<Eigen::VectorXd> null_vectors;
  // Descending eigenvalues of sigma^T sigma; each accepted x brings its partner sigma x / l.
  for (int idx = n - 1; idx >= 0; --idx) {
    Eigen::VectorXd x = orthogonalize(es.eigenvectors().col(idx));
    if (x.norm() < 0.5) continue;
    x.normalize();
    Eigen::VectorXd sx = sigma * x;
    const double l = sx.norm();
    if (l <= 1e-12 * scale) {
      null_vectors.push_back(x);
      chosen.push_back(x);
      continue;
    }
    Eigen::VectorXd y = orthogonalize(sx / l);
    y.normalize();
    const int j = static_cast<int>(out.lambda.size());
    out.o.row(2 * j) = y.transpose();
    out.o.row(2 * j + 1) = x.transpose();
    out.lambda.push_back(y.dot(sigma * x));
    chosen.push_back(x);
    chosen.push_back(y);
  }
  if (null_vectors.size() % 2) throw InvariantError("odd null space in Youla decomposition");
  for (std::size_t k = 0; k < null_vectors.size(); k += 2) {
    const int j = static_cast<int>(out.lambda.size());
    out.o.row(2 * j) = null_vectors[k].transpose();
    out.o.row(2 * j + 1) = null_vectors[k + 1].transpose();
    out.lambda.push_back(0.0);
  }
  if (static_cast<int>(out.lambda.size()) * 2 != n) throw InvariantError("Youla decomposition incomplete");
  return out;
}

Eigen::MatrixXd youla_compose(const YoulaDecomposition& y) {
  const Eigen::MatrixXd lam = CovarianceMatrix::blocks(y.lambda).sigma;
  return y.o.transpose() * lam * y.o;
}

namespace {

double pfaffian_expand(const Eigen::MatrixXd& a) {
  const Eigen::Index m = a.rows();
  if (m == 0) return 1.0;
  if (m == 2) return a(0, 1);
  double total = 0;
  for (Eigen::Index j = 1; j < m; ++j) {
    if (a(0, j) == 0.0) continue;
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 1; k < m; ++k)
      if (k != j) keep.push_back(k);
    Eigen::MatrixXd sub(m - 2, m - 2);
    for (Eigen::Index r = 0; r < m - 2; ++r)
      for (Eigen::Index c = 0; c < m - 2; ++c) sub(r, c) = a(keep[r], keep[c]);
    total += ((j % 2) ? 1.0 : -1.0) * a(0, j) * pfaffian_expand(sub);
  }
  return total;
}

// Parlett-Reid elimination to skew-tridiagonal form with pivoting.
double pfaffian_ltl(Eigen::MatrixXd a) {
  const Eigen::Index n = a.rows();
  double pf = 1.0;
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index kp;
    a.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&kp);
    kp += k + 1;
    if (kp != k + 1) {
      a.row(k + 1).swap(a.row(kp));
      a.col(k + 1).swap(a.col(kp));
      pf = -pf;
    }
    if (a(k + 1, k) == 0.0) return 0.0;
    pf *= a(k, k + 1);
    if (k + 2 < n) {
      const Eigen::Index rest = n - k - 2;
      Eigen::VectorXd tau = a.row(k).tail(rest).transpose() / a(k, k + 1);
      Eigen::VectorXd col = a.col(k + 1).tail(rest);
      a.bottomRightCorner(rest, rest) += tau * col.transpose() - col * tau.transpose();
    }
  }
  return pf;
}

Eigen::MatrixXd principal(const Eigen::MatrixXd& s, const std::vector<int>& idx) {
  const Eigen::Index m = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd sub(m, m);
  for (Eigen::Index r = 0; r < m; ++r)
    for (Eigen::Index c = 0; c < m; ++c) sub(r, c) = s(idx[r], idx[c]);
  return sub;
}

} // namespace

double pfaffian(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw InputError("pfaffian of a non-square matrix");
  if (a.rows() % 2) return 0.0;
  return a.rows() <= 8 ? pfaffian_expand(a) : pfaffian_ltl(a);
}

DenseOperator dense_gaussian_state(const CovarianceMatrix& cov, const GraphReduction& rep) {
  if (cov.n != rep.n) throw InputError("covariance size differs from the representation");
  const YoulaDecomposition y = youla_decompose(cov.sigma);
  const Eigen::Index dim = static_cast<Eigen::Index>(rep.dim());
  std::vector<CMatrix> gens;
  for (int j = 0; j < cov.n; ++j) gens.push_back(rep.generator_matrix(j));
  auto ell = [&](int a) {
    CMatrix l = CMatrix::Zero(dim, dim);
    for (int k = 0; k < cov.n; ++k)
      if (y.o(a, k) != 0.0) l += y.o(a, k) * gens[k];
    return l;
  };
  CMatrix rho = CMatrix::Identity(dim, dim);
  for (std::size_t j = 0; j < y.lambda.size(); ++j) {
    if (y.lambda[j] == 0.0) continue;
    CMatrix factor = CMatrix::Identity(dim, dim) + cplx(0.0, y.lambda[j]) * (ell(2 * j) * ell(2 * j + 1));
    rho = rho * factor;
  }
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DenseOperator::hermitian_from(rho);
}

cplx monomial_expectation(const CovarianceMatrix& cov, Support s) {
  const int k = popcount(s);
  if (k % 2) return 0.0;
  if (k == 0) return 1.0;
  const double pf = pfaffian(principal(cov.sigma, indices_of(s)));
  return i_pow(-(k * (k - 1) / 2)) * pf;
}

double wick_expectation(const CovarianceMatrix& cov, Support s) {
  const int k = popcount(s);
  if (k % 2) return 0.0;
  cplx e = monomial_expectation(cov, s);
  // u_S = i exactly when (chi^S)* = -chi^S, i.e. binom(k,2) odd.
  if ((k * (k - 1) / 2) % 2) e *= cplx(0.0, 1.0);
  return e.real();
}

cplx expectation(const CovarianceMatrix& cov, const Polynomial& h) {
  if (h.n() != cov.n) throw InputError("polynomial and covariance sizes differ");
  cplx total = 0;
  for (const auto& [s, c] : h.terms()) total += c * monomial_expectation(cov, s);
  return total;
}

double expectation_deg4(const CovarianceMatrix& cov, const Polynomial& h) {
  if (h.n() != cov.n) throw InputError("polynomial and covariance sizes differ");
  double total = 0;
  const auto& s = cov.sigma;
  for (const auto& [sup, c] : h.terms()) {
    const int k = popcount(sup);
    if (k == 0) {
      total += c.real();
      continue;
    }
    if (k != 4) throw InputError("expectation_deg4 needs degree-4 terms");
    auto i = indices_of(sup);
    const double pf = s(i[0], i[1]) * s(i[2], i[3]) - s(i[0], i[2]) * s(i[1], i[3]) + s(i[0], i[3]) * s(i[1], i[2]);
    total += -c.real() * pf;
  }
  return total;
}

Eigen::MatrixXd quadratic_coefficients(const Polynomial& h2) {
  const int n = h2.n();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  double scale = 0;
  for (const auto& [s, c] : h2.terms()) scale = std::max(scale, std::abs(c));
  for (const auto& [s, c] : h2.terms()) {
    if (popcount(s) != 2) throw InputError("expected a homogeneous degree-2 polynomial");
    if (std::abs(c.real()) > 1e-12 * std::max(1.0, scale))
      throw InputError("degree-2 coefficients must be purely imaginary (i A_jk)");
    auto idx = indices_of(s);
    a(idx[0], idx[1]) = c.imag();
    a(idx[1], idx[0]) = -c.imag();
  }
  return a;
}

QuadraticSolution solve_quadratic_matrix(const Eigen::MatrixXd& a) {
  if (a.rows() > 0 && (a + a.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw InputError("A must be antisymmetric");
  const YoulaDecomposition y = youla_decompose(a);
  YoulaDecomposition s = y;
  double value = 0;
  for (double& l : s.lambda) {
    value += std::abs(l);
    l = l > 0 ? 1.0 : (l < 0 ? -1.0 : 0.0);
  }
  Eigen::MatrixXd sigma = youla_compose(s);
  sigma = 0.5 * (sigma - sigma.transpose()).eval();
  return {{static_cast<int>(a.rows()), sigma}, value};
}

QuadraticSolution solve_quadratic_exact(const Polynomial& h2) { return solve_quadratic_matrix(quadratic_coefficients(h2)); }

Eigen::MatrixXd build_sdp_objective(const Polynomial& h) {
  const int n = h.n();
  if (n > 24) throw ResourceError("SDP objective supports n <= 24");
  Eigen::MatrixXd hm = Eigen::MatrixXd::Zero(n * n, n * n);
  for (const auto& [s, c] : h.terms()) {
    if (popcount(s) == 0) continue;
    if (popcount(s) != 4) throw InputError("SDP objective needs degree-4 terms");
    if (std::abs(c.imag()) > 1e-12 * std::max(1.0, std::abs(c))) throw InputError("coefficients must be real");
    auto i = indices_of(s);
    const double a = c.real();
    hm(i[0] * n + i[1], i[2] * n + i[3]) -= a;
    hm(i[0] * n + i[2], i[1] * n + i[3]) += a;
    hm(i[0] * n + i[3], i[1] * n + i[2]) -= a;
  }
  return 0.5 * (hm + hm.transpose());
}

namespace {

// Sign-subspace coordinates: R = B S B^T with B_(jk),p = (e_jk - e_kj)/sqrt 2 for p = (j<k).
struct PairBasis {
  int n;
  std::vector<std::pair<int, int>> pairs;

  explicit PairBasis(int n_) : n(n_) {
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) pairs.emplace_back(j, k);
  }
  Eigen::Index size() const { return static_cast<Eigen::Index>(pairs.size()); }

  Eigen::MatrixXd reduce(const Eigen::MatrixXd& full) const {
    const Eigen::Index m = size();
    Eigen::MatrixXd out(m, m);
    for (Eigen::Index p = 0; p < m; ++p)
      for (Eigen::Index q = 0; q < m; ++q) {
        auto [j, k] = pairs[p];
        auto [l, r] = pairs[q];
        out(p, q) = 0.5 * (full(j * n + k, l * n + r) - full(j * n + k, r * n + l) - full(k * n + j, l * n + r) +
                           full(k * n + j, r * n + l));
      }
    return out;
  }

  Eigen::MatrixXd expand(const Eigen::MatrixXd& s) const {
    const Eigen::Index m = size();
    Eigen::MatrixXd full = Eigen::MatrixXd::Zero(n * n, n * n);
    for (Eigen::Index p = 0; p < m; ++p)
      for (Eigen::Index q = 0; q < m; ++q) {
        auto [j, k] = pairs[p];
        auto [l, r] = pairs[q];
        const double v = 0.5 * s(p, q);
        full(j * n + k, l * n + r) += v;
        full(j * n + k, r * n + l) -= v;
        full(k * n + j, l * n + r) -= v;
        full(k * n + j, r * n + l) += v;
      }
    return full;
  }

  // Tr_1(B S B^T), which equals Tr_2 on the sign subspace.
  Eigen::MatrixXd partial_trace(const Eigen::MatrixXd& s) const {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, n);
    const Eigen::Index m = size();
    // Entries R_(ab),(ad) = sum over pair placements; handle the four sign cases directly.
    for (Eigen::Index p = 0; p < m; ++p)
      for (Eigen::Index q = 0; q < m; ++q) {
        const double v = 0.5 * s(p, q);
        if (v == 0.0) continue;
        auto [j, k] = pairs[p];
        auto [l, r] = pairs[q];
        // (jk),(lr): first factors j,l equal -> x(k,r)
        if (j == l) x(k, r) += v;
        if (j == r) x(k, l) -= v;
        if (k == l) x(j, r) -= v;
        if (k == r) x(j, l) += v;
      }
    return x;
  }

  // Adjoint of partial_trace: B^T (I (x) D) B.
  Eigen::MatrixXd partial_trace_adjoint(const Eigen::MatrixXd& d) const {
    const Eigen::Index m = size();
    Eigen::MatrixXd out(m, m);
    for (Eigen::Index p = 0; p < m; ++p)
      for (Eigen::Index q = 0; q < m; ++q) {
        auto [j, k] = pairs[p];
        auto [l, r] = pairs[q];
        double v = 0;
        if (j == l) v += d(k, r);
        if (j == r) v -= d(k, l);
        if (k == l) v -= d(j, r);
        if (k == r) v += d(j, l);
        out(p, q) = 0.5 * v;
      }
    return out;
  }
};

Eigen::MatrixXd clamp_psd(const Eigen::MatrixXd& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (s + s.transpose()));
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

double max_eig(const Eigen::MatrixXd& x) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (x + x.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(x.rows() - 1);
}

// Euclidean projection onto {S : F(S) <= I} with F(S) = Tr_1(B S B^T) and
// F F*(D) = ((n-2) D + tr(D) I) / 4. The correction D = F F*(lambda) shares the
// eigenbasis of X = F(S) and minimizes <D, (F F*)^{-1} D> subject to X - D <= I,
// which gives d_i = max(x_i - 1, beta * sum(d)) with beta = 1/(2n-2).
Eigen::MatrixXd project_trace(const PairBasis& pb, const Eigen::MatrixXd& s) {
  const int n = pb.n;
  const Eigen::MatrixXd x = pb.partial_trace(s);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (x + x.transpose()));
  const Eigen::VectorXd a = es.eigenvalues().array() - 1.0;
  if (a.maxCoeff() <= 0.0) return s;
  const double beta = 1.0 / (2.0 * n - 2.0);
  auto excess = [&](double t) { return a.cwiseMax(beta * t).sum() - t; };
  // excess is strictly decreasing; bracket the root.
  double lo = std::min(0.0, a.minCoeff() / beta), hi = std::max(1.0, a.cwiseMax(0.0).sum() / (1.0 - n * beta));
  while (excess(lo) < 0) lo = 2 * lo - 1;
  while (excess(hi) > 0) hi *= 2;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) > 0 ? lo : hi) = mid;
  }
  const double t = 0.5 * (lo + hi);
  const Eigen::VectorXd dv = a.cwiseMax(beta * t);
  const Eigen::MatrixXd d = es.eigenvectors() * dv.asDiagonal() * es.eigenvectors().transpose();
  // lambda = (F F*)^{-1} D.
  const double trl = 4.0 * d.trace() / (2.0 * n - 2.0);
  const Eigen::MatrixXd lam = (4.0 * d - trl * Eigen::MatrixXd::Identity(n, n)) / (n - 2.0);
  return s - pb.partial_trace_adjoint(lam);
}

Eigen::MatrixXd polish(const PairBasis& pb, const Eigen::MatrixXd& s) {
  Eigen::MatrixXd p = clamp_psd(s);
  const double top = max_eig(pb.partial_trace(p));
  if (top > 1.0) p /= top;
  return p;
}

} // namespace

SdpGaussSolution solve_sdp_gauss(const Polynomial& h, double tol, int max_iter) {
  const int n = h.n();
  if (n < 4) throw InputError("SDP needs n >= 4");
  const Eigen::MatrixXd hfull = build_sdp_objective(h);
  const PairBasis pb(n);
  const Eigen::MatrixXd g = pb.reduce(hfull);
  const double gnorm = g.norm();
  if (tol < 0) tol = 1e-6 * hfull.norm();
  SdpGaussSolution sol;
  sol.n = n;
  const Eigen::Index m = pb.size();
  Eigen::MatrixXd best = Eigen::MatrixXd::Zero(m, m);
  double best_obj = 0;
  if (gnorm > 0) {
    // ADMM on S = W with S in {F(S) <= I} and W PSD; the unit-norm gradient keeps rho scale-free.
    const Eigen::MatrixXd gn = g / gnorm;
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m, m), u = Eigen::MatrixXd::Zero(m, m);
    double rho = 1.0;
    double last_check = -1;
    sol.status = "max_iter";
    for (int it = 0; it < max_iter; ++it) {
      sol.iterations = it + 1;
      const Eigen::MatrixXd sv = project_trace(pb, w - u + gn / rho);
      const Eigen::MatrixXd w_prev = w;
      w = clamp_psd(sv + u);
      u += sv - w;
      const double r_pri = (sv - w).norm();
      const double r_dual = rho * (w - w_prev).norm();
      if (r_pri > 10 * r_dual) {
        rho *= 2;
        u /= 2;
      } else if (r_dual > 10 * r_pri) {
        rho /= 2;
        u *= 2;
      }
      if ((it + 1) % 10 == 0 || it + 1 == max_iter) {
        const Eigen::MatrixXd cand = polish(pb, w);
        const double cobj = cand.cwiseProduct(g).sum();
        if (cobj > best_obj) {
          best_obj = cobj;
          best = cand;
        }
        if (last_check >= 0 && std::abs(cobj - last_check) < tol && r_pri < 1e-6 && r_dual < 1e-6) {
          sol.status = "converged";
          break;
        }
        last_check = cobj;
      }
    }
  }
  const Eigen::MatrixXd& s = best;
  sol.r = pb.expand(s);
  sol.objective = (sol.r.cwiseProduct(hfull)).sum();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::EigenvaluesOnly);
  sol.psd_min_eig = s.rows() ? es.eigenvalues()(0) : 0.0;
  // Tr_1 and Tr_2 of the full matrix, computed independently of the reduced identity.
  Eigen::MatrixXd t1 = Eigen::MatrixXd::Zero(n, n), t2 = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        t1(b, c) += sol.r(a * n + b, a * n + c);
        t2(a, c) += sol.r(a * n + b, c * n + b);
      }
  sol.trace1_excess = std::max(0.0, max_eig(t1) - 1.0);
  sol.trace2_excess = std::max(0.0, max_eig(t2) - 1.0);
  double anti = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n * n; ++c) anti = std::max(anti, std::abs(sol.r(a * n + b, c) + sol.r(b * n + a, c)));
  sol.antisym_violation = anti;
  return sol;
}

Eigen::MatrixXd rounding_draw(const SdpGaussSolution& sol, double sigma, std::uint64_t seed, std::uint64_t trial) {
  const int n = sol.n;
  const Eigen::Index nn = static_cast<Eigen::Index>(n) * n;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (sol.r + sol.r.transpose()));
  Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  CounterRng rng("round", seed, trial);
  Eigen::VectorXd x(nn);
  for (Eigen::Index i = 0; i < nn; ++i) x(i) = rng.rademacher(static_cast<std::uint64_t>(i));
  const Eigen::VectorXd v = es.eigenvectors() * (root.asDiagonal() * (es.eigenvectors().transpose() * x));
  Eigen::MatrixXd s(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) s(j, k) = sigma * v(j * n + k);
  return 0.5 * (s - s.transpose());
}

Eigen::MatrixXd drop_large_modes(const Eigen::MatrixXd& sigma) {
  YoulaDecomposition y = youla_decompose(sigma);
  bool changed = false;
  for (double& l : y.lambda)
    if (std::abs(l) > 1.0) {
      l = 0.0;
      changed = true;
    }
  if (!changed) return sigma;
  Eigen::MatrixXd out = youla_compose(y);
  return 0.5 * (out - out.transpose());
}

RoundingResult round_to_gaussian(const SdpGaussSolution& sol, const Polynomial& h, std::optional<double> sigma_scale,
                                 int trials, std::uint64_t seed) {
  const int n = sol.n;
  RoundingResult best;
  best.cov = CovarianceMatrix::zero(n);
  best.value = expectation_deg4(best.cov, h);
  if (sol.objective <= 0 || trials <= 0) return best;
  std::vector<double> sigmas;
  if (sigma_scale) {
    sigmas.push_back(*sigma_scale);
  } else {
    double anorm = std::sqrt(h.coeff_norm2() - std::norm(h.trace()));
    double eps = anorm > 0 ? sol.objective / (n * anorm) : 0.5;
    eps = std::clamp(eps, 1e-12, 0.5);
    for (double c : {0.1, 0.2, 0.3, 0.4, 0.5}) sigmas.push_back(c / std::sqrt(std::log(1.0 / eps)));
  }
  int counter = 0;
  for (double sg : sigmas)
    for (int t = 0; t < trials; ++t, ++counter) {
      const Eigen::MatrixXd raw = rounding_draw(sol, sg, seed, static_cast<std::uint64_t>(counter));
      CovarianceMatrix cov{n, drop_large_modes(raw)};
      const double v = expectation_deg4(cov, h);
      if (v > best.value) {
        best.value = v;
        best.cov = cov;
        best.sigma = sg;
        best.best_trial = counter;
      }
    }
  return best;
}

WitnessResult syk_gaussian_witness(const Polynomial& h) {
  const int n = h.n();
  if (n % 4) throw InputError("witness needs n divisible by 4");
  const int half = n / 2;
  Eigen::MatrixXd g0 = Eigen::MatrixXd::Zero(n, n);
  for (int b = 0; b < n / 4; ++b) {
    g0(2 * b, 2 * b + 1) = 1.0;
    g0(2 * b + 1, 2 * b) = -1.0;
  }
  Eigen::MatrixXd g1 = Eigen::MatrixXd::Zero(n, n);
  for (int k = half; k < n; ++k)
    for (int l = k + 1; l < n; ++l) {
      double v = 0;
      for (int i = 0; i < half; ++i)
        for (int j = i + 1; j < half; ++j) {
          if (g0(i, j) == 0.0) continue;
          const Support s = (Support{1} << i) | (Support{1} << j) | (Support{1} << k) | (Support{1} << l);
          v += g0(i, j) * h.coeff(s).real();
        }
      g1(k, l) = v;
      g1(l, k) = -v;
    }
  WitnessResult out;
  out.cov = CovarianceMatrix{n, g0};
  out.value = expectation_deg4(out.cov, h);
  out.c = 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(g1);
  out.g1_norm = svd.singularValues()(0);
  if (out.g1_norm == 0.0) return out;
  // g0 and g1 live on disjoint index halves, so ||g0 + C g1|| = max(1, |C| ||g1||).
  const double cmax = 1.0 / out.g1_norm;
  const int grid = 200;
  for (int t = -grid; t <= grid; ++t) {
    const double c = cmax * t / grid;
    CovarianceMatrix cov{n, g0 + c * g1};
    const double v = expectation_deg4(cov, h);
    if (v > out.value) {
      out.value = v;
      out.cov = cov;
      out.c = c;
    }
  }
  return out;
}

std::vector<LowRankTerm> normalize_terms(const std::vector<LowRankTerm>& terms) {
  std::vector<LowRankTerm> out;
  for (const auto& t : terms) {
    if (t.a.rows() != t.a.cols() || (t.a + t.a.transpose()).cwiseAbs().maxCoeff() > 1e-12)
      throw InputError("low-rank term matrices must be antisymmetric");
    const double f = t.a.norm();
    if (f == 0.0) continue;
    out.push_back({t.lambda * f * f, t.a / f});
  }
  return out;
}

Polynomial quadratic_form(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  Polynomial q(n);
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k)
      if (a(j, k) != 0.0) q.add((Support{1} << j) | (Support{1} << k), cplx(0.0, a(j, k)));
  return q;
}

Polynomial lowrank_polynomial(const std::vector<LowRankTerm>& terms) {
  if (terms.empty()) return Polynomial(0);
  const int n = static_cast<int>(terms[0].a.rows());
  const AnticommGraph g = AnticommGraph::complete(n);
  Polynomial p(n);
  for (const auto& t : terms) {
    const Polynomial q = quadratic_form(t.a);
    p += cplx(t.lambda) * multiply(q, q, g);
  }
  return p.chopped(1e-14);
}

LowRankResult lowrank_optimize(const std::vector<LowRankTerm>& terms_in) {
  LowRankResult out;
  out.normalized_terms = normalize_terms(terms_in);
  const auto& terms = out.normalized_terms;
  if (terms_in.size() > 16) throw InputError("lowrank_optimize supports at most 16 terms");
  if (terms.empty()) {
    const int n = terms_in.empty() ? 0 : static_cast<int>(terms_in[0].a.rows());
    out.cov = CovarianceMatrix::zero(n);
    return out;
  }
  const int n = static_cast<int>(terms[0].a.rows());
  auto t_of = [&](const Eigen::MatrixXd& s, const LowRankTerm& t) { return 0.5 * t.a.cwiseProduct(s).sum(); };
  auto surrogate = [&](const Eigen::MatrixXd& s) {
    double v = 0;
    for (const auto& t : terms) {
      const double ta = t_of(s, t);
      v += t.lambda * ta * ta;
    }
    return v;
  };
  std::vector<Eigen::MatrixXd> starts{Eigen::MatrixXd::Zero(n, n)};
  for (const auto& t : terms) {
    starts.push_back(solve_quadratic_matrix(t.a).cov.sigma);
    starts.push_back(solve_quadratic_matrix(-t.a).cov.sigma);
  }
  const Polynomial p = lowrank_polynomial(terms);
  bool first = true;
  for (const auto& start : starts) {
    Eigen::MatrixXd s = start;
    double f = surrogate(s);
    std::vector<double> hist{f};
    for (int it = 0; it < 500; ++it) {
      Eigen::MatrixXd lin = Eigen::MatrixXd::Zero(n, n);
      for (const auto& t : terms) lin += 2.0 * t.lambda * t_of(s, t) * t.a;
      const Eigen::MatrixXd target = solve_quadratic_matrix(lin).cov.sigma;
      // Line search on the segment keeps the iterate a valid state.
      double best_f = f, best_u = 0;
      for (int k = 1; k <= 20; ++k) {
        const double u = k / 20.0;
        const double fu = surrogate((1 - u) * s + u * target);
        if (fu > best_f) {
          best_f = fu;
          best_u = u;
        }
      }
      if (best_u == 0.0 || best_f - f < 1e-9) {
        if (best_u > 0) {
          s = (1 - best_u) * s + best_u * target;
          f = best_f;
          hist.push_back(f);
        }
        break;
      }
      s = (1 - best_u) * s + best_u * target;
      f = best_f;
      hist.push_back(f);
    }
    if (first || f > out.surrogate) {
      out.surrogate = f;
      out.cov = CovarianceMatrix{n, 0.5 * (s - s.transpose())};
      out.history = hist;
      first = false;
    }
  }
  out.value = expectation(out.cov, lowrank_polynomial(terms)).real();
  return out;
}

} // namespace fermiopt
