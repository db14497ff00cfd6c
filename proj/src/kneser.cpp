#include "fermiopt/kneser.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "fermiopt/errors.hpp"
#include "fermiopt/repr.hpp"
#include "fermiopt/rng.hpp"

namespace fermiopt {

SchemeGraph SchemeGraph::even(int n, int q) {
  SchemeGraph sg{n, q, {}};
  for (int d = 2; d <= q; d += 2) sg.nonedge_distances.push_back(d);
  return sg;
}

SchemeGraph SchemeGraph::ekr(int n, int q, int k) {
  SchemeGraph sg{n, q, {}};
  for (int d = 1; d <= q - k; ++d) sg.nonedge_distances.push_back(d);
  return sg;
}

bool SchemeGraph::is_nonedge(int d) const {
  return std::find(nonedge_distances.begin(), nonedge_distances.end(), d) != nonedge_distances.end();
}

namespace {

void validate(const SchemeGraph& sg) {
  if (sg.q < 1 || sg.n < sg.q || sg.n > kMaxIndeterminates) throw InputError("scheme parameters out of range");
  for (int d : sg.nonedge_distances)
    if (d < 1 || d > sg.q) throw InputError("nonedge distance outside 1..q");
}

} // namespace

std::vector<Support> lex_subsets(int n, int q) {
  std::vector<Support> out;
  std::vector<int> idx(q);
  for (int i = 0; i < q; ++i) idx[i] = i;
  if (q > n) return out;
  while (true) {
    Support s = 0;
    for (int i : idx) s |= Support{1} << i;
    out.push_back(s);
    int i = q - 1;
    while (i >= 0 && idx[i] == n - q + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < q; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

AnticommGraph build_kg_graph(const SchemeGraph& sg) {
  validate(sg);
  if (binom(sg.n, sg.q) > 1e4) throw ResourceError("explicit scheme graph above 10^4 vertices");
  const auto verts = lex_subsets(sg.n, sg.q);
  const int nv = static_cast<int>(verts.size());
  std::vector<char> nonedge(sg.q + 1, 0);
  for (int d : sg.nonedge_distances) nonedge[d] = 1;
  AnticommGraph g(nv);
  for (int a = 0; a < nv; ++a)
    for (int b = a + 1; b < nv; ++b) {
      int d = sg.q - popcount(verts[a] & verts[b]);
      if (!nonedge[d]) g.add_edge(a, b);
    }
  return g;
}

std::vector<Support> construct_independent_set(int n, int q, IndependentVariant variant) {
  if (variant == IndependentVariant::fano8) {
    if (n != 8 || q != 4) throw InputError("fano8 needs n = 8, q = 4");
    const int lines[7][3] = {{1, 2, 3}, {1, 4, 5}, {1, 6, 7}, {2, 4, 6}, {2, 5, 7}, {3, 4, 7}, {3, 5, 6}};
    std::vector<Support> out;
    const Support all7 = 0x7F;
    for (const auto& l : lines) {
      Support s = 0;
      for (int p : l) s |= Support{1} << (p - 1);
      out.push_back(s | (Support{1} << 7));
      out.push_back(all7 & ~s);
    }
    return out;
  }
  if (q < 1 || q > n) throw InputError("def1 needs 1 <= q <= n");
  if ((n - q) % 2) throw InputError("def1 needs n and q of equal parity");
  const int pairs = (n - (q % 2)) / 2;
  const int take = q / 2;
  std::vector<Support> out;
  for (Support choice : subsets_colex(pairs, take)) {
    Support s = 0;
    for (int p : indices_of(choice)) s |= Support{3} << (2 * p);
    if (q % 2) s |= Support{1} << (n - 1);
    out.push_back(s);
  }
  return out;
}

bool is_independent(const AnticommGraph& g, const std::vector<int>& set) {
  for (std::size_t a = 0; a < set.size(); ++a)
    for (std::size_t b = a + 1; b < set.size(); ++b)
      if (set[a] == set[b] || g.has_edge(set[a], set[b])) return false;
  return true;
}

std::vector<int> maximum_independent_set(const AnticommGraph& g) {
  const int n = g.n();
  if (n > 200) throw ResourceError("alpha_exact is capped at 200 vertices");
  const int w = g.words();
  using Bits = std::vector<std::uint64_t>;
  // Maximum clique in the complement, greedy-coloring bound (Tomita-style).
  std::vector<Bits> comp(n, Bits(w, 0));
  for (int v = 0; v < n; ++v)
    for (int u = 0; u < n; ++u)
      if (u != v && !g.has_edge(u, v)) comp[v][u >> 6] |= 1ULL << (u & 63);
  auto count = [&](const Bits& b) {
    int c = 0;
    for (auto x : b) c += __builtin_popcountll(x);
    return c;
  };
  std::vector<int> best, cur;
  std::function<void(Bits)> expand = [&](Bits cand) {
    // Greedy coloring of the candidates gives an upper bound per vertex.
    std::vector<int> order, color;
    Bits uncolored = cand;
    int k = 0;
    while (count(uncolored)) {
      ++k;
      Bits avail = uncolored;
      for (int i = 0; i < w; ++i)
        while (avail[i]) {
          int v = i * 64 + __builtin_ctzll(avail[i]);
          avail[i] &= avail[i] - 1;
          uncolored[v >> 6] &= ~(1ULL << (v & 63));
          for (int j = 0; j < w; ++j) avail[j] &= ~comp[v][j];
          order.push_back(v);
          color.push_back(k);
        }
    }
    for (int idx = static_cast<int>(order.size()) - 1; idx >= 0; --idx) {
      if (static_cast<int>(cur.size()) + color[idx] <= static_cast<int>(best.size())) return;
      int v = order[idx];
      cur.push_back(v);
      Bits next(w);
      for (int j = 0; j < w; ++j) next[j] = cand[j] & comp[v][j];
      if (count(next))
        expand(next);
      else if (cur.size() > best.size())
        best = cur;
      cur.pop_back();
      cand[v >> 6] &= ~(1ULL << (v & 63));
    }
  };
  Bits all(w, 0);
  for (int v = 0; v < n; ++v) all[v >> 6] |= 1ULL << (v & 63);
  if (n > 0) expand(all);
  std::sort(best.begin(), best.end());
  return best;
}

int alpha_exact(const AnticommGraph& g) { return static_cast<int>(maximum_independent_set(g).size()); }

BigInt dual_hahn_exact(int n, int q, int d, int z) {
  if (d < 0 || z < 0 || d > q || z > q || q > n) throw InputError("dual Hahn index out of range");
  auto bin = [](int a, int b) -> BigInt {
    if (b < 0 || a < 0 || b > a) return 0;
    BigInt r = 1;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
  };
  BigInt total = 0;
  for (int j = 0; j <= d; ++j) {
    BigInt term = bin(q - j, d - j) * bin(q - z, j) * bin(n - q + j - z, j);
    total += ((d - j) % 2) ? BigInt(-term) : term;
  }
  return total;
}

double dual_hahn_eigenvalue(int n, int q, int d, int z) { return dual_hahn_exact(n, q, d, z).convert_to<double>(); }

namespace {

std::string to_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

// Solves a small dense system exactly; false when singular.
bool solve_rational(std::vector<std::vector<Rational>> a, std::vector<Rational> b, std::vector<Rational>& x) {
  const std::size_t m = b.size();
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    while (piv < m && a[piv][col] == 0) ++piv;
    if (piv == m) return false;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == col || a[r][col] == 0) continue;
      Rational f = a[r][col] / a[col][col];
      for (std::size_t k = col; k < m; ++k) a[r][k] -= f * a[col][k];
      b[r] -= f * b[col];
    }
  }
  x.resize(m);
  for (std::size_t i = 0; i < m; ++i) x[i] = b[i] / a[i][i];
  return true;
}

} // namespace

ThetaCertificate delsarte_theta(const SchemeGraph& sg) {
  validate(sg);
  const int n = sg.n, q = sg.q;
  if (n <= 2 * q) throw InputError("delsarte_theta assumes n > 2q");
  std::vector<int> free;
  for (int e = 1; e <= q; ++e)
    if (!sg.is_nonedge(e)) free.push_back(e);
  const int m = static_cast<int>(free.size());
  if (m > 8) throw InputError("delsarte_theta supports at most 8 multipliers");
  std::vector<std::vector<BigInt>> hh(q + 1, std::vector<BigInt>(m));
  for (int z = 0; z <= q; ++z)
    for (int i = 0; i < m; ++i) hh[z][i] = dual_hahn_exact(n, q, free[i], z);
  const BigInt total = BigInt(binom_u64(n, q));

  ThetaCertificate cert;
  const bool exact = m <= 4;
  cert.exact = exact;
  std::vector<int> active(q);
  for (int z = 1; z <= q; ++z) active[z - 1] = z;

  Rational best_exact = -1;
  double best = -1;
  std::vector<Rational> best_cx;
  std::vector<double> best_cd;
  const double scale = binom(n, q);
  for (Support pick : subsets_colex(q, m)) {
    std::vector<int> zs;
    for (int i : indices_of(pick)) zs.push_back(active[i]);
    if (exact) {
      std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m));
      std::vector<Rational> b(m, Rational(-1)), c;
      for (int r = 0; r < m; ++r)
        for (int i = 0; i < m; ++i) a[r][i] = Rational(hh[zs[r]][i]);
      if (m > 0 && !solve_rational(a, b, c)) continue;
      bool feasible = true;
      Rational p0 = 1;
      for (int z = 0; z <= q && feasible; ++z) {
        Rational p = 1;
        for (int i = 0; i < m; ++i) p += c[i] * Rational(hh[z][i]);
        if (z == 0)
          p0 = p;
        else if (p < 0)
          feasible = false;
      }
      if (!feasible) continue;
      if (p0 > best_exact) {
        best_exact = p0;
        best_cx = c;
        cert.ties = 0;
      } else if (p0 == best_exact && c != best_cx) {
        ++cert.ties;
      }
    } else {
      Eigen::MatrixXd a(m, m);
      for (int r = 0; r < m; ++r)
        for (int i = 0; i < m; ++i) a(r, i) = hh[zs[r]][i].convert_to<double>();
      Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
      if (!lu.isInvertible()) continue;
      Eigen::VectorXd c = lu.solve(Eigen::VectorXd::Constant(m, -1.0));
      if ((a * c + Eigen::VectorXd::Ones(m)).norm() > 1e-9 * std::max(1.0, c.norm())) continue;
      bool feasible = true;
      double p0 = 1;
      for (int z = 0; z <= q && feasible; ++z) {
        double p = 1;
        for (int i = 0; i < m; ++i) p += c(i) * hh[z][i].convert_to<double>();
        if (z == 0)
          p0 = p;
        else if (p < -1e-9 * scale)
          feasible = false;
      }
      if (!feasible) continue;
      std::vector<double> cv(c.data(), c.data() + m);
      if (p0 > best * (1 + 1e-12) + 1e-12) {
        best = p0;
        best_cd = cv;
        cert.ties = 0;
      } else if (std::abs(p0 - best) <= 1e-9 * std::max(1.0, best)) {
        double diff = 0;
        for (int i = 0; i < m; ++i) diff = std::max(diff, std::abs(cv[i] - best_cd[i]));
        if (diff > 1e-9) ++cert.ties;
      }
    }
  }
  if (m == 0) {
    best_exact = 1;
    best = 1;
  }
  if (exact) {
    if (best_exact <= 0) throw InvariantError("Delsarte LP has no feasible vertex");
    Rational theta = Rational(total) / best_exact;
    cert.theta_exact = to_string(theta);
    cert.theta_value = theta.convert_to<double>();
    for (int i = 0; i < m; ++i) {
      cert.multipliers[free[i]] = best_cx[i].convert_to<double>();
      cert.multipliers_exact[free[i]] = to_string(best_cx[i]);
    }
    for (int z = 0; z <= q; ++z) {
      Rational p = 1;
      for (int i = 0; i < m; ++i) p += best_cx[i] * Rational(hh[z][i]);
      cert.p_values.push_back(p.convert_to<double>());
      if (z > 0 && p == 0) cert.tight_constraints.push_back(z);
    }
  } else {
    if (best <= 0) throw InvariantError("Delsarte LP has no feasible vertex");
    cert.theta_value = scale / best;
    for (int i = 0; i < m; ++i) cert.multipliers[free[i]] = best_cd[i];
    for (int z = 0; z <= q; ++z) {
      double p = 1;
      for (int i = 0; i < m; ++i) p += best_cd[i] * hh[z][i].convert_to<double>();
      cert.p_values.push_back(p);
      if (z > 0 && std::abs(p) <= 1e-9 * scale) cert.tight_constraints.push_back(z);
    }
  }
  return cert;
}

ThetaCertificate theta4_closed_form(int n) {
  if (n % 2) throw InputError("theta4_closed_form needs even n");
  if (n < 12) throw InputError("certificate invalid for n < 12: p(1) would be negative");
  const int np = n - 4;
  const Rational c3 = Rational(1, 2 * (np - 4));
  const Rational c1 = Rational(1, 4) - c3;
  ThetaCertificate cert;
  cert.exact = true;
  std::vector<Rational> p(5);
  for (int z = 0; z <= 4; ++z)
    p[z] = 1 + c1 * Rational(dual_hahn_exact(n, 4, 1, z)) + c3 * Rational(dual_hahn_exact(n, 4, 3, z));
  const Rational expect0 = Rational((n - 1) * (n - 3), 3);
  const Rational expect1 = Rational(BigInt(n - 2) * (n - 4) * (n - 12), BigInt(12) * (n - 8));
  const Rational expect3 = Rational(BigInt(n - 4) * (n - 6), BigInt(4) * (n - 8));
  if (p[0] != expect0 || p[1] != expect1 || p[2] != 0 || p[3] != expect3 || p[4] != 0)
    throw InvariantError("closed-form multipliers do not reproduce p(z)");
  for (int z = 1; z <= 4; ++z)
    if (p[z] < 0) throw InvariantError("closed-form certificate has negative p(z)");
  const Rational theta = Rational(BigInt(binom_u64(n, 4))) / p[0];
  if (theta != Rational(BigInt(binom_u64(n / 2, 2)))) throw InvariantError("closed-form theta differs from binom(n/2,2)");
  cert.theta_value = theta.convert_to<double>();
  cert.theta_exact = to_string(theta);
  cert.multipliers = {{1, c1.convert_to<double>()}, {3, c3.convert_to<double>()}};
  cert.multipliers_exact = {{1, to_string(c1)}, {3, to_string(c3)}};
  for (int z = 0; z <= 4; ++z) {
    cert.p_values.push_back(p[z].convert_to<double>());
    if (z > 0 && p[z] == 0) cert.tight_constraints.push_back(z);
  }
  return cert;
}

double def_product_bound(const SchemeGraph& sg) {
  double b = 1;
  for (int d : sg.nonedge_distances) b *= static_cast<double>(sg.n - sg.q + d) / d;
  return b;
}

double theta_transitive(const AnticommGraph& g) {
  const int n = g.n();
  if (n == 0) throw InputError("empty graph");
  const int deg = g.degree(0);
  for (int v = 1; v < n; ++v)
    if (g.degree(v) != deg) throw InputError("theta_transitive needs a regular graph");
  if (deg == 0) return n;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (auto [j, k] : g.edges()) a(j, k) = a(k, j) = 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0), lmax = es.eigenvalues()(n - 1);
  return n * (-lmin) / (lmax - lmin);
}

namespace {

struct LinearFormOps {
  std::vector<CMatrix> gens;

  CMatrix form(const std::vector<double>& a) const {
    CMatrix l = CMatrix::Zero(gens[0].rows(), gens[0].cols());
    for (std::size_t j = 0; j < a.size(); ++j)
      if (a[j] != 0.0) l += a[j] * gens[j];
    return l;
  }
};

std::vector<double> normalized(std::vector<double> a) {
  double nrm = 0;
  for (double x : a) nrm += x * x;
  nrm = std::sqrt(nrm);
  for (double& x : a) x /= nrm;
  return a;
}

// Common eigenvector of the commuting generators in `set`; returns the signs.
std::vector<int> common_signs(const std::vector<CMatrix>& gens, const std::vector<int>& set, CVector v) {
  std::vector<int> signs;
  for (int j : set) {
    CVector plus = 0.5 * (v + gens[j] * v);
    CVector minus = 0.5 * (v - gens[j] * v);
    if (plus.norm() >= minus.norm()) {
      v = plus.normalized();
      signs.push_back(1);
    } else {
      v = minus.normalized();
      signs.push_back(-1);
    }
  }
  return signs;
}

} // namespace

PsiResult psi_local_search(const AnticommGraph& g, int trials, std::uint64_t seed) {
  const int n = g.n();
  if (n == 0) throw InputError("empty graph");
  GraphReduction rep = reduce_graph_f2(g);
  LinearFormOps ops;
  for (int j = 0; j < n; ++j) ops.gens.push_back(rep.generator_matrix(j));

  // f(a) = lambda_max(L^2) = ||L||^2 and its gradient on the sphere.
  auto evaluate = [&](const std::vector<double>& a, std::vector<double>* grad) {
    DenseOperator l = DenseOperator::hermitian_from(ops.form(a));
    Eigen::SelfAdjointEigenSolver<CMatrix> es(l.mat);
    const auto& ev = es.eigenvalues();
    const Eigen::Index dim = ev.size();
    const bool top = ev(dim - 1) >= -ev(0);
    const double lam = top ? ev(dim - 1) : ev(0);
    if (grad) {
      CVector v = es.eigenvectors().col(top ? dim - 1 : 0);
      grad->assign(n, 0.0);
      for (int j = 0; j < n; ++j) (*grad)[j] = 2.0 * lam * v.dot(ops.gens[j] * v).real();
    }
    return lam * lam;
  };
  auto ascend = [&](std::vector<double> a) {
    a = normalized(a);
    std::vector<double> grad;
    double f = evaluate(a, &grad);
    double step = 0.5;
    for (int it = 0; it < 400 && step > 1e-12; ++it) {
      double ga = 0;
      for (int j = 0; j < n; ++j) ga += grad[j] * a[j];
      std::vector<double> tang(n);
      double tn = 0;
      for (int j = 0; j < n; ++j) {
        tang[j] = grad[j] - ga * a[j];
        tn += tang[j] * tang[j];
      }
      if (std::sqrt(tn) < 1e-10) break;
      std::vector<double> trial(n);
      for (int j = 0; j < n; ++j) trial[j] = a[j] + step * tang[j];
      trial = normalized(trial);
      std::vector<double> tgrad;
      double ft = evaluate(trial, &tgrad);
      if (ft > f) {
        a = trial;
        f = ft;
        grad = tgrad;
        step *= 1.5;
      } else {
        step *= 0.5;
      }
    }
    return std::make_pair(f, a);
  };

  PsiResult out;
  if (n <= 200) {
    std::vector<int> set = maximum_independent_set(g);
    CVector v = CVector::Ones(static_cast<Eigen::Index>(rep.dim())).normalized();
    std::vector<int> signs = common_signs(ops.gens, set, v);
    std::vector<double> a(n, 0.0);
    for (std::size_t i = 0; i < set.size(); ++i) a[set[i]] = signs[i];
    auto [f, best] = ascend(a);
    out.independent_start_value = evaluate(normalized(a), nullptr);
    out.best_value = f;
    out.best_a = best;
  }
  for (int t = 0; t < trials; ++t) {
    CounterRng rng("psi", seed, static_cast<std::uint64_t>(t));
    std::vector<double> a(n);
    for (int j = 0; j < n; ++j) a[j] = rng.normal(j);
    auto [f, best] = ascend(a);
    out.trial_values.push_back(f);
    if (f > out.best_value) {
      out.best_value = f;
      out.best_a = best;
    }
  }
  return out;
}

LocalOptResult local_opt_check(const AnticommGraph& g, const std::vector<int>& s) {
  const int n = g.n();
  for (int j : s)
    if (j < 0 || j >= n) throw InputError("vertex outside the graph");
  if (s.empty() || !is_independent(g, s)) throw InputError("S is not an independent set");
  LocalOptResult out;
  for (int v = 0; v < n && out.maximal; ++v) {
    if (std::find(s.begin(), s.end(), v) != s.end()) continue;
    bool touches = false;
    for (int j : s) touches = touches || g.has_edge(v, j);
    if (!touches) out.maximal = false;
  }
  GraphReduction rep = reduce_graph_f2(g);
  LinearFormOps ops;
  for (int j = 0; j < n; ++j) ops.gens.push_back(irreducible_block(rep.generator_matrix(j), rep));

  CVector v = CVector::Ones(ops.gens[0].rows()).normalized();
  std::vector<int> signs = common_signs(ops.gens, s, v);
  std::vector<double> a0(n, 0.0);
  for (std::size_t i = 0; i < s.size(); ++i) a0[s[i]] = signs[i];
  a0 = normalized(a0);
  out.a0 = a0;

  // Orthonormal tangent basis at a0.
  const Eigen::VectorXd center = Eigen::Map<Eigen::VectorXd>(a0.data(), n);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr{Eigen::MatrixXd(center)};
  Eigen::MatrixXd full_q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd tangent = full_q.rightCols(n - 1);

  auto f = [&](const Eigen::VectorXd& t) {
    Eigen::VectorXd a = center + tangent * t;
    a.normalize();
    std::vector<double> av(a.data(), a.data() + n);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(ops.form(av), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(es.eigenvalues().size() - 1);
  };

  {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(ops.form(a0), Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const Eigen::Index dim = ev.size();
    out.value = ev(dim - 1);
    int mult = 1;
    while (mult < dim && ev(dim - 1) - ev(dim - 1 - mult) <= 1e-9) ++mult;
    out.top_multiplicity = mult;
  }
  if (out.top_multiplicity > 1) {
    out.status = "degenerate_top";
    out.grad_norm = NAN;
    out.hessian_max_eig = NAN;
    return out;
  }

  const int m = n - 1;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(m);
  const double f0 = f(zero);
  auto derivatives = [&](double h, Eigen::VectorXd& grad, Eigen::MatrixXd& hess) {
    grad.resize(m);
    hess.resize(m, m);
    for (int i = 0; i < m; ++i) {
      Eigen::VectorXd e = Eigen::VectorXd::Unit(m, i) * h;
      double fp = f(e), fm = f(-e);
      grad(i) = (fp - fm) / (2 * h);
      hess(i, i) = (fp - 2 * f0 + fm) / (h * h);
    }
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        Eigen::VectorXd ei = Eigen::VectorXd::Unit(m, i) * h, ej = Eigen::VectorXd::Unit(m, j) * h;
        double v = (f(ei + ej) - f(ei - ej) - f(-ei + ej) + f(-ei - ej)) / (4 * h * h);
        hess(i, j) = hess(j, i) = v;
      }
  };
  Eigen::VectorXd g1, g2;
  Eigen::MatrixXd h1, h2;
  derivatives(1e-4, g1, h1);
  derivatives(5e-5, g2, h2);
  Eigen::VectorXd grad = (4 * g2 - g1) / 3;
  Eigen::MatrixXd hess = (4 * h2 - h1) / 3;
  out.grad_norm = grad.norm();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> hs(hess, Eigen::EigenvaluesOnly);
  out.hessian_max_eig = hs.eigenvalues()(m - 1);
  return out;
}

} // namespace fermiopt
