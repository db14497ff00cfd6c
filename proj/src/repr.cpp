#include "fermiopt/repr.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>

#include "fermiopt/errors.hpp"
#include "fermiopt/kernels.hpp"

namespace fermiopt {

namespace {
constexpr int kMaxQubits = 14;
constexpr Eigen::Index kFullEigCap = 4096;
} // namespace

PauliString pauli_mul(const PauliString& a, const PauliString& b) {
  int sign_flip = __builtin_popcountll(a.z & b.x) & 1;
  return {a.x ^ b.x, a.z ^ b.z, (a.phase + b.phase + 2 * sign_flip) & 3};
}

cplx pauli_phase(const PauliString& p) { return i_pow(p.phase); }

CMatrix pauli_dense(const PauliString& p, int qubits) {
  const std::size_t dim = std::size_t{1} << qubits;
  CMatrix m = CMatrix::Zero(dim, dim);
  const cplx ph = pauli_phase(p);
  for (std::size_t b = 0; b < dim; ++b) m(b ^ p.x, b) = __builtin_parityll(p.z & b) ? -ph : ph;
  return m;
}

PauliString pauli_letter(char letter, int k, int qubits) {
  const std::uint64_t bit = std::uint64_t{1} << (qubits - 1 - k);
  switch (letter) {
  case 'I': return {};
  case 'X': return {bit, 0, 0};
  case 'Z': return {0, bit, 0};
  case 'Y': return {bit, bit, 1};
  default: throw InputError(std::string("unknown Pauli letter ") + letter);
  }
}

double hermitian_defect(const CMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

DenseOperator DenseOperator::hermitian_from(CMatrix m) {
  double scale = std::max(1.0, m.size() ? m.cwiseAbs().maxCoeff() : 0.0);
  if (hermitian_defect(m) > 1e-12 * scale) throw ContractError("matrix is not Hermitian");
  DenseOperator out{std::move(m), true};
  return out;
}

GraphReduction build_gamma_representation(int n, int cap) {
  if (n <= 0 || n % 2) throw InputError("gamma representation needs a positive even n");
  if (n > cap || n / 2 > kMaxQubits) throw ResourceError("n above the representation cap");
  GraphReduction rep;
  rep.n = n;
  rep.r = n / 2;
  rep.s = 0;
  rep.qubits = n / 2;
  for (int k = 0; k < n / 2; ++k) {
    PauliString prefix;
    for (int j = 0; j < k; ++j) prefix = pauli_mul(prefix, pauli_letter('Z', j, rep.qubits));
    rep.generators.push_back(pauli_mul(prefix, pauli_letter('X', k, rep.qubits)));
    rep.generators.push_back(pauli_mul(prefix, pauli_letter('Y', k, rep.qubits)));
  }
  return rep;
}

GraphReduction reduce_graph_f2(const AnticommGraph& g, int cap) {
  const int n = g.n();
  if (n > cap || n > kMaxIndeterminates) throw ResourceError("graph above the representation cap");
  std::vector<std::vector<std::uint8_t>> a(n, std::vector<std::uint8_t>(n, 0));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) a[j][k] = g.has_edge(j, k);

  // w <- i^{a[w][v]} w v, recorded so the images can be unwound afterwards.
  struct Step {
    int w, v, phase;
  };
  std::vector<Step> steps;
  auto substitute = [&](int w, int v) {
    steps.push_back({w, v, a[w][v]});
    for (int y = 0; y < n; ++y) {
      if (y == w) continue;
      a[w][y] ^= a[v][y];
      a[y][w] = a[w][y];
    }
  };

  std::vector<int> open(n);
  for (int j = 0; j < n; ++j) open[j] = j;
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> isolated;
  while (!open.empty()) {
    int u = open.front();
    auto it = std::find_if(open.begin() + 1, open.end(), [&](int v) { return a[u][v] != 0; });
    if (it == open.end()) {
      isolated.push_back(u);
      open.erase(open.begin());
      continue;
    }
    int v = *it;
    open.erase(it);
    open.erase(open.begin());
    pairs.emplace_back(u, v);
    for (int w : open) {
      if (a[w][v]) substitute(w, u);
      if (a[w][u]) substitute(w, v);
    }
  }

  GraphReduction rep;
  rep.n = n;
  rep.r = static_cast<int>(pairs.size());
  rep.s = static_cast<int>(isolated.size());
  rep.qubits = rep.r + rep.s;
  if (rep.qubits > kMaxQubits) throw ResourceError("representation dimension above cap");
  std::vector<PauliString> img(n);
  for (int p = 0; p < rep.r; ++p) {
    img[pairs[p].first] = pauli_letter('X', p, rep.qubits);
    img[pairs[p].second] = pauli_letter('Y', p, rep.qubits);
  }
  for (int j = 0; j < rep.s; ++j) img[isolated[j]] = pauli_letter('Z', rep.r + j, rep.qubits);
  for (auto st = steps.rbegin(); st != steps.rend(); ++st) {
    PauliString prev = pauli_mul(img[st->w], img[st->v]);
    prev.phase = (prev.phase - st->phase) & 3;
    img[st->w] = prev;
  }
  rep.generators = std::move(img);
  return rep;
}

CMatrix irreducible_block(const CMatrix& m, const GraphReduction& rep) {
  if (rep.s == 0) return m;
  const Eigen::Index sub = Eigen::Index{1} << rep.r;
  CMatrix out(sub, sub);
  for (Eigen::Index i = 0; i < sub; ++i)
    for (Eigen::Index j = 0; j < sub; ++j) out(i, j) = m(i << rep.s, j << rep.s);
  return out;
}

PauliString monomial_pauli(const GraphReduction& rep, Support s) {
  PauliString p;
  while (s) {
    int j = __builtin_ctzll(s);
    s &= s - 1;
    p = pauli_mul(p, rep.generators[j]);
  }
  return p;
}

DenseOperator represent(const Polynomial& h, const GraphReduction& rep) {
  if (h.n() != rep.n) throw InputError("polynomial and representation disagree on n");
  const std::size_t dim = rep.dim();
  // Group terms by X-mask; each group is a signed diagonal in a permuted basis.
  std::map<std::uint64_t, std::vector<cplx>> groups;
  for (const auto& [s, c] : h.terms()) {
    PauliString p = monomial_pauli(rep, s);
    auto& d = groups[p.x];
    if (d.empty()) d.assign(dim, cplx(0.0));
    kernels::parity_axpy(d.data(), dim, p.z, c * pauli_phase(p));
  }
  CMatrix m = CMatrix::Zero(dim, dim);
  for (const auto& [x, d] : groups)
    for (std::size_t b = 0; b < dim; ++b) m(b ^ x, b) += d[b];
  DenseOperator out{std::move(m), false};
  double scale = std::max(1.0, out.mat.size() ? out.mat.cwiseAbs().maxCoeff() : 0.0);
  out.hermitian = hermitian_defect(out.mat) <= 1e-12 * scale;
  return out;
}

namespace {

double residual(const CMatrix& a, const CVector& v, double lambda) { return (a * v - lambda * v).norm(); }

// Extremal eigenpair by Lanczos with full reorthogonalization, restarted from
// the current Ritz vector.
std::pair<double, CVector> lanczos_extreme(const CMatrix& a, bool largest, double tol) {
  const Eigen::Index dim = a.rows();
  const Eigen::Index m = std::min<Eigen::Index>(dim, 80);
  std::mt19937_64 gen(12345);
  std::normal_distribution<double> nd;
  CVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = cplx(nd(gen), nd(gen));
  v.normalize();
  double theta = 0;
  const double anorm = a.cwiseAbs().rowwise().sum().maxCoeff();
  for (int restart = 0; restart < 200; ++restart) {
    CMatrix q(dim, m);
    Eigen::VectorXd alpha(m), beta(m);
    q.col(0) = v;
    Eigen::Index k = 0;
    for (; k < m; ++k) {
      CVector w = a * q.col(k);
      alpha(k) = q.col(k).dot(w).real();
      for (int pass = 0; pass < 2; ++pass) w -= q.leftCols(k + 1) * (q.leftCols(k + 1).adjoint() * w);
      beta(k) = w.norm();
      if (k + 1 == m || beta(k) < 1e-14 * std::max(1.0, anorm)) {
        ++k;
        break;
      }
      q.col(k + 1) = w / beta(k);
    }
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      t(i, i) = alpha(i);
      if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta(i);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    Eigen::Index idx = largest ? k - 1 : 0;
    theta = es.eigenvalues()(idx);
    v = q.leftCols(k) * es.eigenvectors().col(idx).cast<cplx>();
    v.normalize();
    if (residual(a, v, theta) <= tol * std::max(1.0, anorm)) break;
  }
  return {theta, v};
}

} // namespace

EigenData eig_extremes(const DenseOperator& a, EigMode mode) {
  if (!a.hermitian) throw ContractError("eig_extremes needs a Hermitian operator");
  EigenData out;
  const Eigen::Index dim = a.dim();
  if (dim == 0) throw InputError("empty operator");
  const double anorm = std::max(1e-300, a.mat.cwiseAbs().rowwise().sum().maxCoeff());
  if (dim <= kFullEigCap) {
    // Exact spectrum from the dense solver; for max/min the vectors come from
    // Lanczos (much cheaper than full eigenvectors) and must agree with it.
    const bool vectors = mode == EigMode::full || dim <= 64;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a.mat, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw InvariantError("Hermitian eigensolver failed");
    const Eigen::VectorXd ev = es.eigenvalues();
    out.lambda_min = ev(0);
    out.lambda_max = ev(dim - 1);
    int mult = 1;
    while (mult < dim && ev(dim - 1) - ev(dim - 1 - mult) <= 1e-9 * anorm) ++mult;
    out.multiplicity_max = mult;
    if (mode == EigMode::full) out.spectrum.assign(ev.data(), ev.data() + dim);
    if (vectors) {
      out.v_min = es.eigenvectors().col(0);
      out.v_max = es.eigenvectors().col(dim - 1);
    } else {
      auto fetch = [&](bool largest, CVector& v) {
        auto [lam, vec] = lanczos_extreme(a.mat, largest, 1e-11);
        double target = largest ? out.lambda_max : out.lambda_min;
        if (std::abs(lam - target) > 1e-9 * anorm) {
          Eigen::SelfAdjointEigenSolver<CMatrix> full(a.mat);
          vec = full.eigenvectors().col(largest ? dim - 1 : 0);
        }
        v = vec;
      };
      if (mode != EigMode::min) fetch(true, out.v_max);
      if (mode != EigMode::max) fetch(false, out.v_min);
    }
  } else {
    if (mode == EigMode::full) throw ResourceError("full spectrum above dimension 4096");
    if (mode != EigMode::min) std::tie(out.lambda_max, out.v_max) = lanczos_extreme(a.mat, true, 1e-11);
    if (mode != EigMode::max) std::tie(out.lambda_min, out.v_min) = lanczos_extreme(a.mat, false, 1e-11);
  }
  if (out.v_max.size()) out.residual_max = residual(a.mat, out.v_max, out.lambda_max);
  if (out.v_min.size()) out.residual_min = residual(a.mat, out.v_min, out.lambda_min);
  if (out.residual_max > 1e-9 * anorm || out.residual_min > 1e-9 * anorm)
    throw InvariantError("eigenpair residual above 1e-9 * norm");
  return out;
}

double opt_value(const Polynomial& h, const GraphReduction& rep) {
  return eig_extremes(represent(h, rep), EigMode::max).lambda_max;
}

GraphReduction complete_representation(int n) { return build_gamma_representation(n + (n & 1)); }

double opt_complete(const Polynomial& h) {
  GraphReduction rep = complete_representation(h.n());
  return opt_value(embed(h, rep.n), rep);
}

double hermitian_norm(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

double opt_pm(const Polynomial& h, const GraphReduction& rep) {
  if (h.empty()) return 0.0;
  // represent is a homomorphism, so rep(h* h) = rep(h)* rep(h).
  DenseOperator a = represent(h, rep);
  CMatrix hh = a.mat.adjoint() * a.mat;
  hh = 0.5 * (hh + hh.adjoint()).eval();
  double top = eig_extremes(DenseOperator{std::move(hh), true}, EigMode::max).lambda_max;
  return std::sqrt(std::max(0.0, top));
}

CMatrix skew_exponential(const DenseOperator& zeta, double theta) {
  double scale = std::max(1.0, zeta.mat.cwiseAbs().maxCoeff());
  if ((zeta.mat + zeta.mat.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw ContractError("zeta is not skew-adjoint");
  CMatrix k = cplx(0, 1) * zeta.mat;
  k = 0.5 * (k + k.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(k);
  // zeta = -i K, so e^{-theta zeta} = e^{i theta K}.
  CVector ph = (cplx(0, theta) * es.eigenvalues().cast<cplx>()).array().exp();
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

DenseOperator skew_exponential_conjugate(const DenseOperator& zeta, double theta, const DenseOperator& rho) {
  if (theta == 0.0) return rho;
  CMatrix u = skew_exponential(zeta, theta);
  DenseOperator out{u * rho.mat * u.adjoint(), rho.hermitian};
  if (out.hermitian) out.mat = 0.5 * (out.mat + out.mat.adjoint()).eval();
  return out;
}

void export_dense(const DenseOperator& a, const std::string& path) {
  std::ofstream bin(path + ".bin", std::ios::binary);
  if (!bin) throw InputError("cannot write " + path + ".bin");
  for (Eigen::Index i = 0; i < a.mat.rows(); ++i)
    for (Eigen::Index j = 0; j < a.mat.cols(); ++j) {
      double re = a.mat(i, j).real(), im = a.mat(i, j).imag();
      bin.write(reinterpret_cast<const char*>(&re), sizeof re);
      bin.write(reinterpret_cast<const char*>(&im), sizeof im);
    }
  std::ofstream hdr(path + ".json");
  hdr << "{\"dim\": " << a.mat.rows() << ", \"hermitian\": " << (a.hermitian ? "true" : "false") << "}\n";
}

} // namespace fermiopt
