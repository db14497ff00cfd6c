#include "fermiopt/certify.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <unordered_map>

#include "fermiopt/errors.hpp"
#include "fermiopt/syk.hpp"

namespace fermiopt {

namespace {

const double kImagTol = 1e-12;

// Real coefficients of a homogeneous degree-4 Hamiltonian.
std::map<Support, double> real_quartic_coeffs(const Polynomial& h) {
  if (!h.empty() && !h.is_homogeneous(4)) throw InputError("expected a homogeneous degree-4 polynomial");
  std::map<Support, double> out;
  double scale = 0;
  for (const auto& [s, c] : h.terms()) scale = std::max(scale, std::abs(c));
  for (const auto& [s, c] : h.terms()) {
    if (std::abs(c.imag()) > kImagTol * std::max(1.0, scale))
      throw InputError("degree-4 coefficients must be real (h self-adjoint)");
    out[s] = c.real();
  }
  return out;
}

void require_even_at_least_12(int n) {
  if (n < 12) throw InputError("n < 12: the binom(n/2,2) theta step is invalid below 12");
  if (n % 2) throw InputError("certificate needs even n");
}

double coeff_sq_sum(const std::map<Support, double>& c) {
  double s = 0;
  for (const auto& [k, v] : c) s += v * v;
  return s;
}

// Sign of the permutation sorting (a, b, c, d) (distinct).
int perm_sign4(const int (&v)[4]) {
  int inv = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) inv += v[i] > v[j];
  return (inv % 2) ? -1 : 1;
}

const int kPerms[24][4] = {
    {0, 1, 2, 3}, {0, 1, 3, 2}, {0, 2, 1, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}, {0, 3, 2, 1},
    {1, 0, 2, 3}, {1, 0, 3, 2}, {1, 2, 0, 3}, {1, 2, 3, 0}, {1, 3, 0, 2}, {1, 3, 2, 0},
    {2, 0, 1, 3}, {2, 0, 3, 1}, {2, 1, 0, 3}, {2, 1, 3, 0}, {2, 3, 0, 1}, {2, 3, 1, 0},
    {3, 0, 1, 2}, {3, 0, 2, 1}, {3, 1, 0, 2}, {3, 1, 2, 0}, {3, 2, 0, 1}, {3, 2, 1, 0}};

// Degree-4 coefficients of sum_m tau_m^2 (commutator form) from K = (J^mat)^2.
std::map<Support, double> commutator_deg4(const JTensor& jt) {
  const int n = jt.n;
  const Eigen::MatrixXd k = jt.jmat * jt.jmat;
  const double pref = -9.0 * n / 576.0;
  std::map<Support, double> out;
  for (Support u : subsets_colex(n, 4)) {
    auto idx = indices_of(u);
    double acc = 0;
    for (const auto& p : kPerms) {
      int v[4] = {idx[p[0]], idx[p[1]], idx[p[2]], idx[p[3]]};
      acc += perm_sign4(v) * k(v[0] * n + v[1], v[2] * n + v[3]);
    }
    if (acc != 0.0) out[u] = pref * acc;
  }
  return out;
}

double norm2(const std::map<Support, double>& c) { return std::sqrt(coeff_sq_sum(c)); }

std::map<Support, double> triangular_deg4(const Polynomial& h) {
  const int n = h.n();
  const auto a = real_quartic_coeffs(h);
  const AnticommGraph g = AnticommGraph::complete(n);
  std::unordered_map<Support, double> lookup(a.begin(), a.end());
  auto get = [&](Support s) {
    auto it = lookup.find(s);
    return it == lookup.end() ? 0.0 : it->second;
  };
  std::map<Support, double> out;
  for (int m = 4; m < n; ++m) {
    const Support mb = Support{1} << m;
    for (Support u : subsets_colex(m, 4)) {
      auto idx = indices_of(u);
      // Three ways to split U into two pairs P | Q.
      const Support pairs[3][2] = {
          {(Support{1} << idx[0]) | (Support{1} << idx[1]), (Support{1} << idx[2]) | (Support{1} << idx[3])},
          {(Support{1} << idx[0]) | (Support{1} << idx[2]), (Support{1} << idx[1]) | (Support{1} << idx[3])},
          {(Support{1} << idx[0]) | (Support{1} << idx[3]), (Support{1} << idx[1]) | (Support{1} << idx[2])}};
      double acc = 0;
      for (int l = 0; l < m; ++l) {
        const Support lb = Support{1} << l;
        if (u & lb) continue;
        for (const auto& pq : pairs) {
          const Support sa = pq[0] | lb, sb = pq[1] | lb;
          const double va = get(sa | mb);
          if (va == 0.0) continue;
          const double vb = get(sb | mb);
          if (vb == 0.0) continue;
          acc += 2.0 * product_sign(sa, sb, g) * va * vb;
        }
      }
      if (acc != 0.0) out[u] += -static_cast<double>(n) * acc;
    }
  }
  return out;
}

Polynomial from_real(int n, double scalar, const std::map<Support, double>& deg4) {
  Polynomial p(n);
  if (scalar != 0.0) p.add(0, scalar);
  for (const auto& [s, v] : deg4) p.add(s, v);
  return p;
}

CertificateReport upper_report(const std::string& method, int degree) {
  CertificateReport r;
  r.method = method;
  r.side = "upper";
  r.target = "Opt";
  r.sos_degree = degree;
  return r;
}

} // namespace

double operator_norm_symmetric(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return 0;
  if (m.rows() <= 2000) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(m.rows() - 1)));
  }
  // Power iteration on m^2 for larger inputs.
  Eigen::VectorXd v = Eigen::VectorXd::Ones(m.rows()).normalized();
  double prev = 0;
  for (int it = 0; it < 5000; ++it) {
    Eigen::VectorXd w = m * (m * v);
    double nrm = w.norm();
    if (nrm == 0) return 0;
    v = w / nrm;
    if (std::abs(nrm - prev) <= 1e-9 * nrm) return std::sqrt(nrm);
    prev = nrm;
  }
  throw InvariantError("power iteration did not converge");
}

JTensor build_jtensor(const Polynomial& h) {
  JTensor jt;
  jt.n = h.n();
  jt.coeffs = real_quartic_coeffs(h);
  const int n = jt.n;
  jt.jmat = Eigen::MatrixXd::Zero(n * n, n * n);
  for (const auto& [s, v] : jt.coeffs) {
    auto idx = indices_of(s);
    for (const auto& p : kPerms) {
      int w[4] = {idx[p[0]], idx[p[1]], idx[p[2]], idx[p[3]]};
      jt.jmat(w[0] * n + w[1], w[2] * n + w[3]) = perm_sign4(w) * v;
    }
  }
  return jt;
}

CertificateReport chernoff_moment_bound(int n, int q) {
  if (q > n || n % 2 || n <= 0) throw InputError("chernoff bound needs q <= n and even n");
  double best = INFINITY;
  int best_k = 0;
  for (int k = 2; k <= 4 * n; k += 2) {
    // log((k-1)!!) = lgamma(k+1) - (k/2) log 2 - lgamma(k/2+1)
    double ldf = std::lgamma(k + 1.0) - 0.5 * k * std::log(2.0) - std::lgamma(0.5 * k + 1.0);
    double v = std::exp((0.5 * n * std::log(2.0) + ldf) / k);
    if (v < best) {
      best = v;
      best_k = k;
    }
  }
  CertificateReport r;
  r.method = "chernoff";
  r.side = "upper";
  r.target = "E[Opt]";
  r.bound = best;
  r.evidence["k"] = best_k;
  r.evidence["bound_over_sqrt_n"] = best / std::sqrt(n);
  r.note = "probabilistic bound on the expectation over the ensemble, not instance-specific";
  return r;
}

Polynomial commutator_tau_square_symbolic(const Polynomial& h) {
  const int n = h.n();
  const AnticommGraph g = AnticommGraph::complete(n);
  const cplx pref(0.0, std::sqrt(static_cast<double>(n)) / 8.0);
  Polynomial total(n);
  for (int m = 0; m < n; ++m) {
    Polynomial tau = pref * commutator(h, Polynomial::monomial(n, Support{1} << m), g);
    total += multiply(tau, tau, g);
  }
  return total;
}

Polynomial commutator_tau_square_matrix(const Polynomial& h) {
  const JTensor jt = build_jtensor(h);
  return from_real(h.n(), h.n() * coeff_sq_sum(jt.coeffs) / 4.0, commutator_deg4(jt));
}

std::vector<Polynomial> triangular_taus(const Polynomial& h) {
  const int n = h.n();
  const auto a = real_quartic_coeffs(h);
  const cplx pref(0.0, std::sqrt(static_cast<double>(n)));
  std::vector<Polynomial> taus(n, Polynomial(n));
  for (const auto& [s, v] : a) {
    const int m = 63 - __builtin_clzll(s);
    taus[m].add(s & ~(Support{1} << m), pref * v);
  }
  return taus;
}

Polynomial triangular_tau_square_symbolic(const Polynomial& h) {
  const AnticommGraph g = AnticommGraph::complete(h.n());
  Polynomial total(h.n());
  for (const auto& t : triangular_taus(h)) total += multiply(t, t, g);
  return total;
}

Polynomial triangular_tau_square_fast(const Polynomial& h) {
  const auto a = real_quartic_coeffs(h);
  return from_real(h.n(), h.n() * coeff_sq_sum(a), triangular_deg4(h));
}

CalibrationReport run_calibration_self_test() {
  CalibrationReport rep;
  for (int n : {8, 10, 12}) {
    rep.sizes.push_back(n);
    const Polynomial h = sample_syk(n, 4, 0x5eed0000ULL + n).h;
    const double scale = std::max(1.0, h.coeff_norm2());
    rep.max_commutator_diff = std::max(
        rep.max_commutator_diff,
        max_coeff_diff(commutator_tau_square_symbolic(h), commutator_tau_square_matrix(h)) / scale);
    rep.max_triangular_diff = std::max(
        rep.max_triangular_diff,
        max_coeff_diff(triangular_tau_square_symbolic(h), triangular_tau_square_fast(h)) / scale);
    // h = -(i/sqrt n) sum_m tau_m chi_m for the triangular decomposition.
    const AnticommGraph g = AnticommGraph::complete(n);
    Polynomial rebuilt(n);
    const auto taus = triangular_taus(h);
    for (int m = 0; m < n; ++m)
      rebuilt += multiply(taus[m], Polynomial::monomial(n, Support{1} << m), g);
    rebuilt *= cplx(0.0, -1.0 / std::sqrt(static_cast<double>(n)));
    rep.max_reconstruction_diff = std::max(rep.max_reconstruction_diff, max_coeff_diff(rebuilt, h));
  }
  rep.passed = rep.max_commutator_diff <= 1e-10 && rep.max_triangular_diff <= 1e-10 &&
               rep.max_reconstruction_diff <= 1e-12;
  return rep;
}

const CalibrationReport& ensure_calibrated() {
  static std::once_flag once;
  static CalibrationReport report;
  std::call_once(once, [] { report = run_calibration_self_test(); });
  if (!report.passed) throw InvariantError("tau-square calibration self-test failed");
  return report;
}

CertificateReport schatten4_certificate(const Polynomial& h) {
  require_even_at_least_12(h.n());
  ensure_calibrated();
  const int n = h.n();
  const JTensor jt = build_jtensor(h);
  const double t0 = n * coeff_sq_sum(jt.coeffs) / 4.0;
  const Eigen::MatrixXd k = jt.jmat * jt.jmat;
  const auto c = commutator_deg4(jt);
  const double theta = binom(n / 2, 2);
  const double cn = norm2(c);
  CertificateReport r = upper_report("schatten4", 8);
  r.bound = std::sqrt(t0 + cn * std::sqrt(theta));
  r.evidence["deg0"] = t0;
  r.evidence["deg4_norm"] = cn;
  r.evidence["theta"] = theta;
  r.evidence["jmat_schatten4"] = std::sqrt(k.norm());
  return r;
}

CertificateReport tau_triangular_certificate(const Polynomial& h) {
  require_even_at_least_12(h.n());
  ensure_calibrated();
  const int n = h.n();
  const auto a = real_quartic_coeffs(h);
  const double deg0 = n * coeff_sq_sum(a);
  const auto c = triangular_deg4(h);
  const double theta = binom(n / 2, 2);
  const double cn = norm2(c);
  CertificateReport r = upper_report("tau", 8);
  r.bound = std::sqrt(deg0 + cn * std::sqrt(theta));
  r.evidence["deg0"] = deg0;
  r.evidence["deg4_norm"] = cn;
  r.evidence["theta"] = theta;
  return r;
}

CertificateReport fragment42_certificate(const Polynomial& h) {
  ensure_calibrated();
  const int n = h.n();
  const JTensor jt = build_jtensor(h);
  const double t0 = n * coeff_sq_sum(jt.coeffs) / 4.0;
  const double op = operator_norm_symmetric(jt.jmat);
  const double kappa = 9.0 * n / 576.0 * n * (n - 1);
  CertificateReport r = upper_report("frag42", 6);
  r.bound = std::sqrt(t0 + kappa * op * op);
  r.evidence["deg0"] = t0;
  r.evidence["kappa"] = kappa;
  r.evidence["jmat_op"] = op;
  return r;
}

CertificateReport fooling_pseudostate(const Polynomial& h) {
  const int n = h.n();
  const int q = h.empty() ? 0 : h.degree();
  if (h.empty() || !h.is_homogeneous(q) || q % 2) throw InputError("fooling needs a homogeneous even-degree h");
  if (binom(n, q / 2) > 4000) throw ResourceError("fooling moment block above 4000 rows");
  const AnticommGraph g = AnticommGraph::complete(n);
  const auto rows = subsets_colex(n, q / 2);
  const Eigen::Index dim = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  // m_{S,T} = tr((chi^S)* h chi^T): only the chi^{S xor T} term of h survives.
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) {
      const Support s = rows[i], t = rows[j];
      if (s & t) continue;
      const cplx a = h.coeff(s | t);
      if (a == cplx(0.0)) continue;
      // (chi^S)* chi^U chi^T = rev(S) sign(S,U) sign(T,T) since S^U = T.
      const Support u = s | t;
      const int sign = reversal_sign(s, g) * product_sign(s, u, g) * product_sign(s ^ u, t, g);
      m(i, j) = static_cast<double>(sign) * a;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  const double op = dim ? std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(dim - 1))) : 0.0;
  CertificateReport r;
  r.method = "fooling";
  r.side = "lower";
  r.target = "SOS" + std::to_string(q);
  r.sos_degree = q;
  r.evidence["m_op"] = op;
  r.evidence["coeff_norm2"] = h.coeff_norm2();
  if (op == 0.0) {
    r.bound = 0;
    r.evidence["C"] = 0;
    r.pseudostate = Polynomial::scalar(n, 1.0);
    return r;
  }
  const double c = (1.0 - 1e-6) / op;
  r.evidence["C"] = c;
  r.evidence["min_eig_1_plus_Cm"] = 1.0 + c * es.eigenvalues()(0);
  r.bound = c * h.coeff_norm2();
  r.pseudostate = Polynomial::scalar(n, 1.0) + c * h;
  r.note = "lower bound on the degree-" + std::to_string(q) + " SOS value, not on Opt";
  return r;
}

std::map<Support, cplx> functional_values(const Polynomial& rho, const AnticommGraph& g, int max_degree) {
  std::map<Support, cplx> out;
  for (int d = 0; d <= std::min(max_degree, rho.n()); ++d)
    for (Support s : subsets_colex(rho.n(), d)) out[s] = 0.0;
  // tr(rho chi^S) = rho_S tr(chi^S chi^S).
  for (const auto& [s, c] : rho.terms()) out[s] = c * static_cast<double>(product_sign(s, s, g));
  return out;
}

namespace {

cplx lookup_value(const std::map<Support, cplx>& values, Support s) {
  auto it = values.find(s);
  if (it == values.end()) throw InputError("moment values missing a required support");
  return it->second;
}

// E[(chi^S)* p] for a polynomial p, using values of the supports of (chi^S)* p.
cplx functional_of_product(const std::map<Support, cplx>& values, Support s, const Polynomial& p,
                           const AnticommGraph& g) {
  cplx acc = 0;
  const int rev = reversal_sign(s, g);
  for (const auto& [t, c] : p.terms()) acc += c * static_cast<double>(rev * product_sign(s, t, g)) * lookup_value(values, s ^ t);
  return acc;
}

void check_hermitian_values(const std::map<Support, cplx>& values, const AnticommGraph& g, MomentCheck& out) {
  if (std::abs(lookup_value(values, 0) - 1.0) > 1e-9) out.violated_linear_constraints.push_back("E[1] != 1");
  for (const auto& [s, v] : values) {
    // E[(chi^S)*] = conj(E[chi^S]).
    if (std::abs(static_cast<double>(reversal_sign(s, g)) * v - std::conj(v)) > 1e-9)
      out.violated_linear_constraints.push_back("hermiticity at support " + std::to_string(s));
  }
}

void finish_psd(const Eigen::MatrixXcd& m, MomentCheck& out) {
  out.rows = static_cast<int>(m.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  out.min_eig = es.eigenvalues()(0);
  out.is_psd = out.min_eig >= -1e-8;
}

std::vector<Support> rows_up_to(int n, int k) {
  std::vector<Support> rows;
  for (int d = 0; d <= k; ++d)
    for (Support s : subsets_colex(n, d)) rows.push_back(s);
  return rows;
}

} // namespace

MomentCheck moment_matrix_check(const std::map<Support, cplx>& values, int k, const AnticommGraph& g) {
  if (k < 0) throw InputError("negative moment degree");
  MomentCheck out;
  check_hermitian_values(values, g, out);
  const auto rows = rows_up_to(g.n(), k);
  const Eigen::Index dim = static_cast<Eigen::Index>(rows.size());
  if (dim > 4000) throw ResourceError("moment matrix above 4000 rows");
  Eigen::MatrixXcd m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) {
      const Support s = rows[i], t = rows[j];
      m(i, j) = static_cast<double>(reversal_sign(s, g) * product_sign(s, t, g)) * lookup_value(values, s ^ t);
    }
  finish_psd(m, out);
  return out;
}

MomentCheck moment_matrix_check_fragment(const std::map<Support, cplx>& values, const Polynomial& h,
                                         const std::optional<Eigen::MatrixXcd>& m02) {
  const int n = h.n();
  const AnticommGraph g = AnticommGraph::complete(n);
  MomentCheck out;
  check_hermitian_values(values, g, out);
  std::vector<Polynomial> taus;
  const cplx pref(0.0, std::sqrt(static_cast<double>(n)) / 8.0);
  for (int m = 0; m < n; ++m) taus.push_back(pref * commutator(h, Polynomial::monomial(n, Support{1} << m), g));

  const auto rows = rows_up_to(n, 2);
  const Eigen::Index nc = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index dim = nc + n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  // M_{4,0}.
  for (Eigen::Index i = 0; i < nc; ++i)
    for (Eigen::Index j = 0; j < nc; ++j) {
      const Support s = rows[i], t = rows[j];
      m(i, j) = static_cast<double>(reversal_sign(s, g) * product_sign(s, t, g)) * lookup_value(values, s ^ t);
    }
  // M_{1,1}: chi_i against tau_m, a combination of degree <= 4 values. Odd total degree entries stay 0.
  for (Eigen::Index i = 0; i < nc; ++i) {
    if (popcount(rows[i]) != 1) continue;
    for (int t = 0; t < n; ++t) {
      const cplx v = functional_of_product(values, rows[i], taus[t], g);
      m(i, nc + t) = v;
      m(nc + t, i) = std::conj(v);
    }
  }
  // M_{0,2}.
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      cplx v;
      if (m02) {
        v = (*m02)(a, b);
      } else {
        const Polynomial prod = multiply(taus[a], taus[b], g);
        v = functional_of_product(values, 0, prod, g);
      }
      m(nc + a, nc + b) = v;
    }
  // {tau_a, tau_b} has chi-degree <= 4, so its value is pinned by M_{4,0}.
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      const Polynomial anti = commutator(taus[a], taus[b], g, true);
      const cplx expect = functional_of_product(values, 0, anti, g);
      const cplx got = m(nc + a, nc + b) + m(nc + b, nc + a);
      if (std::abs(expect - got) > 1e-9)
        out.violated_linear_constraints.push_back("anticommutator tau_" + std::to_string(a + 1) + ",tau_" +
                                                  std::to_string(b + 1));
    }
  finish_psd(m, out);
  return out;
}

} // namespace fermiopt
