#include "fermiopt/variational.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fermiopt/errors.hpp"
#include "fermiopt/kernels.hpp"

namespace fermiopt {

namespace {

// tr(A B) / dim without forming the product.
cplx trace_product(const CMatrix& a, const CMatrix& b) {
  return (a.array() * b.transpose().array()).sum() / static_cast<double>(a.rows());
}

// Instance indices (phi then chi) to the setup layout. The map is monotone,
// so normal-ordered supports stay normal-ordered.
Polynomial lift(const Polynomial& h, const VariationalSetup& setup) {
  if (h.n() == setup.total) return h;
  if (h.n() > setup.n1 + setup.n) throw InputError("polynomial has more indeterminates than the instance");
  const Support phi_mask = (Support{1} << setup.n1) - 1;
  Polynomial out(setup.total);
  for (const auto& [sup, c] : h.terms()) {
    const Support chi = (sup & ~phi_mask) << (setup.chi(0) - setup.n1);
    out.add((sup & phi_mask) | chi, c);
  }
  return out;
}

DenseOperator dense_hermitian(const Polynomial& h, const VariationalSetup& setup) {
  DenseOperator d = represent(lift(h, setup), setup.rep);
  d.mat = 0.5 * (d.mat + d.mat.adjoint()).eval();
  d.hermitian = true;
  return d;
}

// (L (x) I_k) m (R (x) I_k), one small product per pair of copy indices.
CMatrix kron_sandwich(const CMatrix& l, const CMatrix& m, const CMatrix& r, Eigen::Index k) {
  using Strided = Eigen::Map<const CMatrix, 0, Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>>;
  using StridedOut = Eigen::Map<CMatrix, 0, Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>>;
  const Eigen::Index dim = m.rows(), d = dim / k;
  CMatrix out(dim, dim);
  CMatrix tmp(d, d);
  const Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic> stride(k * dim, k);
  for (Eigen::Index c = 0; c < k; ++c)
    for (Eigen::Index c2 = 0; c2 < k; ++c2) {
      Strided blk(m.data() + c + c2 * dim, d, d, stride);
      tmp.noalias() = l * blk;
      StridedOut(out.data() + c + c2 * dim, d, d, stride).noalias() = tmp * r;
    }
  return out;
}

CMatrix state_at(const VariationalSetup& setup, double theta) {
  const ZetaSpectrum& sp = *setup.spectrum;
  CVector ph = (cplx(0, theta) * sp.lambda.cast<cplx>()).array().exp();
  CMatrix rot = ph.asDiagonal() * sp.rho_t.transpose() * ph.conjugate().asDiagonal();
  CMatrix rho = kron_sandwich(sp.vecs, rot, sp.vecs.adjoint(), sp.copies);
  return 0.5 * (rho + rho.adjoint());
}

} // namespace

double normalized_trace(const CMatrix& m) { return m.trace().real() / static_cast<double>(m.rows()); }

VariationalSetup prepare_reference(const SykInstance& inst) {
  const int n1 = inst.n1, n = inst.n_chi();
  if (n1 < 3 || n < 1) throw InputError("prepare_reference needs a 2-colored instance with n1 >= 3 and n >= 1");
  if (inst.h.n() != n1 + n) throw InputError("instance polynomial does not match n1 + n");

  VariationalSetup s;
  s.n1 = n1;
  s.n = n;
  s.block = n1 + n + ((n1 + n) & 1);
  s.total = s.block + n + (n & 1);
  if (s.total > kVariationalMajoranaCap)
    throw ResourceError("variational setup needs at most " + std::to_string(kVariationalMajoranaCap) + " Majoranas");
  s.rep = complete_representation(s.total);
  s.h = lift(inst.h, s);

  const Support phi_mask = (Support{1} << n1) - 1;
  const double rt = std::sqrt(static_cast<double>(n));
  s.taus.assign(n, Polynomial(s.total));
  s.zeta_poly = Polynomial(s.total);
  for (const auto& [sup, c] : inst.h.terms()) {
    Support chi_part = sup & ~phi_mask;
    if (popcount(sup & phi_mask) != 3 || popcount(chi_part) != 1)
      throw InputError("term is not of the form phi^S chi_m with |S| = 3");
    const int m = __builtin_ctzll(chi_part) - n1;
    const Support phi = sup & phi_mask;
    // h = (i/sqrt n) sum tau_m chi_m, and phi^S chi_m is already in normal order.
    const cplx t = cplx(0, -rt) * c;
    s.taus[m].add(phi, t);
    s.zeta_poly.add(phi | (Support{1} << s.sigma(m)), t);
  }

  const AnticommGraph g = AnticommGraph::complete(s.total);
  Polynomial rho = Polynomial::scalar(s.total, 1.0);
  for (int j = 0; j < n; ++j) {
    // 1 + i chi_j sigma_j; sigma sits below chi, so the stored monomial is sigma_j chi_j.
    Polynomial f = Polynomial::scalar(s.total, 1.0);
    f.add((Support{1} << s.chi(j)) | (Support{1} << s.sigma(j)), cplx(0, -1));
    rho = multiply(rho, f, g);
  }
  s.rho0 = represent(rho, s.rep);
  s.rho0.mat = 0.5 * (s.rho0.mat + s.rho0.mat.adjoint()).eval();
  s.rho0.hermitian = true;
  s.zeta = represent(s.zeta_poly, s.rep);
  s.zeta.hermitian = false;

  // tr(rho0 [zeta, h]) straight from coefficients.
  s.first_order = multiply(rho, commutator(s.zeta_poly, s.h, g), g).trace().real();

  // zeta lives on the leading `block` Majoranas, whose qubits are the high
  // bits of the full index: K = K_small (x) I.
  Polynomial zeta_small(s.block);
  for (const auto& [sup, c] : s.zeta_poly.terms()) zeta_small.add(sup, c);
  CMatrix k_small = cplx(0, 1) * represent(zeta_small, build_gamma_representation(s.block)).mat;
  k_small = 0.5 * (k_small + k_small.adjoint()).eval();
  const Eigen::Index ds = k_small.rows(), dc = static_cast<Eigen::Index>(s.rep.dim()) / ds;
  double kron_diff = 0;
  for (Eigen::Index a = 0; a < ds; ++a)
    for (Eigen::Index b = 0; b < ds; ++b)
      for (Eigen::Index c = 0; c < dc; ++c)
        kron_diff = std::max(kron_diff, std::abs(cplx(0, 1) * s.zeta.mat(a * dc + c, b * dc + c) - k_small(a, b)));
  // Matching diagonal blocks and total mass leaves nothing off the block diagonal.
  const double mass = s.zeta.mat.squaredNorm();
  kron_diff = std::max(kron_diff, std::abs(mass - static_cast<double>(dc) * k_small.squaredNorm()) / std::max(1.0, mass));
  if (kron_diff > 1e-10) throw InvariantError("zeta does not factor through the leading Majoranas");

  Eigen::SelfAdjointEigenSolver<CMatrix> es(k_small);
  auto sp = std::make_shared<ZetaSpectrum>();
  sp->lambda.resize(ds * dc);
  for (Eigen::Index a = 0; a < ds; ++a) sp->lambda.segment(a * dc, dc).setConstant(es.eigenvalues()(a));
  sp->vecs = es.eigenvectors();
  sp->copies = dc;
  sp->rho_t = kron_sandwich(sp->vecs.adjoint(), s.rho0.mat, sp->vecs, dc).transpose();
  s.spectrum = std::move(sp);
  return s;
}

double conjugated_value(const VariationalSetup& setup, const Polynomial& h, double theta) {
  if (!std::isfinite(theta)) throw InputError("theta must be finite");
  const DenseOperator hd = dense_hermitian(h, setup);
  DenseOperator rho = skew_exponential_conjugate(setup.zeta, theta, setup.rho0);
  return trace_product(rho.mat, hd.mat).real();
}

std::vector<double> default_theta_grid() { return parse_theta_grid("0:1.5:40"); }

std::vector<double> parse_theta_grid(const std::string& spec) {
  std::stringstream ss(spec);
  std::string a, b, c;
  if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c))
    throw InputError("grid must look like lo:hi:count");
  double lo = 0, hi = 0;
  long count = 0;
  try {
    lo = std::stod(a);
    hi = std::stod(b);
    count = std::stol(c);
  } catch (const std::exception&) {
    throw InputError("grid must look like lo:hi:count");
  }
  if (count < 1 || !std::isfinite(lo) || !std::isfinite(hi)) throw InputError("grid needs a positive count and finite ends");
  std::vector<double> grid(count);
  for (long i = 0; i < count; ++i) grid[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
  return grid;
}

SweepResult theta_sweep(const VariationalSetup& setup, const Polynomial& h, const std::vector<double>& grid) {
  if (grid.empty()) throw InputError("theta grid is empty");
  const ZetaSpectrum& sp = *setup.spectrum;
  const DenseOperator hd = dense_hermitian(h, setup);
  const CMatrix ht = kron_sandwich(sp.vecs.adjoint(), hd.mat, sp.vecs, sp.copies);
  const Eigen::Index dim = ht.rows();

  SweepResult out;
  out.best_value = -std::numeric_limits<double>::infinity();
  CVector p(dim);
  for (double theta : grid) {
    if (!std::isfinite(theta)) throw InputError("theta must be finite");
    p = (cplx(0, theta) * sp.lambda.cast<cplx>()).array().exp();
    cplx total = 0;
    for (Eigen::Index j = 0; j < dim; ++j)
      total += p(j) * kernels::cdot3(sp.rho_t.col(j).data(), p.data(), ht.col(j).data(), dim);
    const double v = total.real() / static_cast<double>(dim);
    out.curve.emplace_back(theta, v);
    if (v > out.best_value) {
      out.best_value = v;
      out.best_theta = theta;
    }
  }
  return out;
}

BchResidual bch_residual(const VariationalSetup& setup, const Polynomial& h, double theta) {
  if (!(std::abs(theta) <= 1.0)) throw InputError("bch_residual needs |theta| <= 1");
  // In the eigenbasis of K = i zeta, zeta = diag(-i lambda), so with d = lambda_a - lambda_b
  //   [zeta, h]_ab = -i d h_ab,  [zeta, [zeta, h]]_ab = -d^2 h_ab,
  //   (e^{theta zeta} h e^{-theta zeta})_ab = e^{-i theta d} h_ab.
  // Operator norms are basis independent, so both sides are read off there.
  const ZetaSpectrum& sp = *setup.spectrum;
  const DenseOperator hd = dense_hermitian(h, setup);
  const CMatrix ht = kron_sandwich(sp.vecs.adjoint(), hd.mat, sp.vecs, sp.copies);
  const Eigen::Index dim = ht.rows();
  CMatrix c2(dim, dim), r(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b)
    for (Eigen::Index a = 0; a < dim; ++a) {
      const double d = sp.lambda(a) - sp.lambda(b);
      c2(a, b) = -d * d * ht(a, b);
      // e^{-i x} - 1 + i x, by series when x is small to avoid cancellation.
      const double x = theta * d;
      const cplx e = std::abs(x) < 1e-3 ? cplx(-x * x / 2 + x * x * x * x / 24, x * x * x / 6)
                                        : std::exp(cplx(0, -x)) - 1.0 + cplx(0, x);
      r(a, b) = e * ht(a, b);
    }
  BchResidual out;
  out.bound = 0.5 * theta * theta * hermitian_norm(0.5 * (c2 + c2.adjoint()));
  if (theta == 0.0) return out;
  out.lhs = hermitian_norm(0.5 * (r + r.adjoint()));
  return out;
}

void apply_pauli_rotation(RowCMatrix& u, const PauliString& p, double angle) {
  const std::size_t dim = static_cast<std::size_t>(u.rows());
  const std::size_t cols = static_cast<std::size_t>(u.cols());
  const cplx ph = pauli_phase(p);
  const double c = std::cos(angle), s = std::sin(angle);
  auto par = [&](std::size_t col) { return __builtin_parityll(p.z & col) ? -1.0 : 1.0; };
  if (p.x == 0) {
    for (std::size_t r = 0; r < dim; ++r) u.row(r) *= c - cplx(0, s) * ph * par(r);
    return;
  }
  // P(r, r^x) = ph * (-1)^{|z & (r^x)|}
  for (std::size_t r = 0; r < dim; ++r) {
    const std::size_t rp = r ^ p.x;
    if (rp < r) continue;
    const cplx beta = cplx(0, -s) * ph * par(rp);
    const cplx gamma = cplx(0, -s) * ph * par(r);
    kernels::pair_rotate(u.row(r).data(), u.row(rp).data(), cols, c, beta, gamma);
  }
}

CMatrix trotter_unitary(const VariationalSetup& setup, double theta, int steps) {
  if (steps < 1) throw InputError("trotter needs steps >= 1");
  const std::size_t dim = setup.rep.dim();
  RowCMatrix u = RowCMatrix::Identity(dim, dim);
  const double dt = theta / steps;
  std::vector<std::pair<PauliString, double>> factors;
  for (const auto& [sup, c] : setup.zeta_poly.terms()) {
    // zeta terms are i*a*M with M self-adjoint, M^2 = 1.
    if (std::abs(c.real()) > 1e-12 * std::max(1.0, std::abs(c)))
      throw InvariantError("zeta coefficient is not imaginary");
    factors.emplace_back(monomial_pauli(setup.rep, sup), dt * c.imag());
  }
  for (int k = 0; k < steps; ++k)
    for (const auto& [p, angle] : factors) apply_pauli_rotation(u, p, angle);
  return CMatrix(u);
}

DenseOperator trotter_state(const VariationalSetup& setup, double theta, int steps) {
  CMatrix u = trotter_unitary(setup, theta, steps);
  CMatrix rho = u * setup.rho0.mat * u.adjoint();
  return {0.5 * (rho + rho.adjoint()), true};
}

TrotterReport trotter_compare(const VariationalSetup& setup, const Polynomial& h, double theta, int steps) {
  TrotterReport out;
  const DenseOperator hd = dense_hermitian(h, setup);
  DenseOperator rt = trotter_state(setup, theta, steps);
  DenseOperator re = skew_exponential_conjugate(setup.zeta, theta, setup.rho0);
  out.value_trotter = trace_product(rt.mat, hd.mat).real();
  out.value_exact = trace_product(re.mat, hd.mat).real();
  out.fidelity = trace_product(rt.mat, re.mat).real() / trace_product(re.mat, re.mat).real();
  return out;
}

PipelineResult witness_pipeline(const SykInstance& inst, std::uint64_t seed) {
  const int n = inst.n;
  if (n % 4) throw InputError("witness_pipeline needs n divisible by 4");
  if (n + n / 2 > kVariationalMajoranaCap)
    throw ResourceError("witness_pipeline needs n + n/2 <= " + std::to_string(kVariationalMajoranaCap));
  TwoColorSplit split = split_two_color(inst);

  SykInstance two;
  two.model = "syk2col";
  two.n = n;
  two.q = 4;
  two.n1 = 3 * n / 4;
  two.seed = seed;
  two.h = split.c * split.h_in;
  VariationalSetup setup = prepare_reference(two);
  SweepResult sw = theta_sweep(setup, setup.h, default_theta_grid());

  // The state lives on phi, chi and sigma; pairing it with polynomials in
  // phi and chi alone is the same as tracing the sigmas out first.
  CMatrix rho = state_at(setup, sw.best_theta);
  auto value = [&](const Polynomial& p) { return trace_product(rho, dense_hermitian(p, setup).mat).real(); };
  const double v_in = value(split.h_in);
  const double v_out = value(split.h_out);

  PipelineResult out;
  out.theta = sw.best_theta;
  out.value = value(inst.h);
  out.report = {{"c", split.c},
                {"first_order", setup.first_order},
                {"sweep_best", sw.best_value},
                {"value_in", v_in},
                {"value_out", v_out},
                {"out_in_ratio", v_in != 0.0 ? std::abs(v_out) / std::abs(v_in) : INFINITY},
                {"n1", two.n1},
                {"n_chi", n - two.n1},
                {"majoranas", setup.total}};
  return out;
}

} // namespace fermiopt
