#include "fermiopt/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fermiopt/errors.hpp"

namespace fermiopt {

Support support_of(const std::vector<int>& indices) {
  Support s = 0;
  for (int j : indices) {
    if (j < 0 || j >= kMaxIndeterminates) throw InputError("index out of range: " + std::to_string(j));
    Support bit = Support{1} << j;
    if (s & bit) throw InputError("repeated index " + std::to_string(j));
    s |= bit;
  }
  return s;
}

std::vector<int> indices_of(Support s) {
  std::vector<int> out;
  out.reserve(popcount(s));
  while (s) {
    out.push_back(__builtin_ctzll(s));
    s &= s - 1;
  }
  return out;
}

Support first_subset(int q) {
  return q >= 64 ? ~Support{0} : (Support{1} << q) - 1;
}

Support next_subset(Support s, int n) {
  if (s == 0) return 0;
  Support c = s & (~s + 1);
  Support r = s + c;
  if (r == 0) return 0;
  Support next = (((r ^ s) >> 2) / c) | r;
  if (n < 64 && (next >> n)) return 0;
  return next;
}

std::vector<Support> subsets_colex(int n, int q) {
  std::vector<Support> out;
  if (q < 0 || q > n) return out;
  if (q == 0) return {0};
  for (Support s = first_subset(q); s; s = next_subset(s, n)) out.push_back(s);
  return out;
}

AnticommGraph::AnticommGraph(int n) : n_(n), words_((n + 63) / 64) {
  if (n < 0) throw InputError("negative vertex count");
  rows_.assign(static_cast<std::size_t>(n) * words_, 0);
}

AnticommGraph AnticommGraph::complete(int n) {
  AnticommGraph g(n);
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) g.add_edge(j, k);
  return g;
}

AnticommGraph AnticommGraph::cycle(int n) {
  AnticommGraph g(n);
  for (int j = 0; j < n; ++j) g.add_edge(j, (j + 1) % n);
  return g;
}

AnticommGraph AnticommGraph::matching(int pairs) {
  AnticommGraph g(2 * pairs);
  for (int p = 0; p < pairs; ++p) g.add_edge(2 * p, 2 * p + 1);
  return g;
}

AnticommGraph AnticommGraph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  AnticommGraph g(n);
  for (auto [j, k] : edges) g.add_edge(j, k);
  return g;
}

void AnticommGraph::add_edge(int j, int k) {
  if (j < 0 || k < 0 || j >= n_ || k >= n_) throw InputError("edge index out of range");
  if (j == k) throw InputError("self-loop at vertex " + std::to_string(j + 1));
  rows_[static_cast<std::size_t>(j) * words_ + (k >> 6)] |= 1ULL << (k & 63);
  rows_[static_cast<std::size_t>(k) * words_ + (j >> 6)] |= 1ULL << (j & 63);
}

int AnticommGraph::degree(int j) const {
  int d = 0;
  for (int w = 0; w < words_; ++w) d += __builtin_popcountll(row(j)[w]);
  return d;
}

std::size_t AnticommGraph::edge_count() const {
  std::size_t total = 0;
  for (int j = 0; j < n_; ++j) total += degree(j);
  return total / 2;
}

std::vector<std::pair<int, int>> AnticommGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int j = 0; j < n_; ++j)
    for (int k = j + 1; k < n_; ++k)
      if (has_edge(j, k)) out.emplace_back(j, k);
  return out;
}

bool AnticommGraph::is_complete() const {
  return edge_count() == static_cast<std::size_t>(n_) * (n_ - 1) / 2;
}

Polynomial Polynomial::scalar(int n, cplx c) {
  Polynomial p(n);
  p.add(0, c);
  return p;
}

Polynomial Polynomial::monomial(int n, Support s, cplx c) {
  if (n < 64 && (s >> n)) throw InputError("support exceeds indeterminate count");
  Polynomial p(n);
  p.add(s, c);
  return p;
}

Polynomial Polynomial::linear(const std::vector<double>& a) {
  Polynomial p(static_cast<int>(a.size()));
  for (std::size_t j = 0; j < a.size(); ++j) p.add(Support{1} << j, a[j]);
  return p;
}

void Polynomial::add(Support s, cplx c) {
  if (c == cplx(0.0)) return;
  auto [it, inserted] = terms_.try_emplace(s, c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx(0.0)) terms_.erase(it);
  }
}

void Polynomial::set(Support s, cplx c) {
  if (c == cplx(0.0))
    terms_.erase(s);
  else
    terms_[s] = c;
}

cplx Polynomial::coeff(Support s) const {
  auto it = terms_.find(s);
  return it == terms_.end() ? cplx(0.0) : it->second;
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& [s, c] : terms_) d = std::max(d, popcount(s));
  return d;
}

bool Polynomial::is_homogeneous(int q) const {
  return std::all_of(terms_.begin(), terms_.end(), [q](const auto& t) { return popcount(t.first) == q; });
}

double Polynomial::coeff_norm2() const {
  double s = 0;
  for (const auto& [k, c] : terms_) s += std::norm(c);
  return s;
}

Polynomial Polynomial::chopped(double tol) const {
  Polynomial p(n_);
  for (const auto& [s, c] : terms_)
    if (std::abs(c) > tol) p.terms_.emplace(s, c);
  return p;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.n_ != n_) throw InputError("indeterminate count mismatch");
  for (const auto& [s, c] : o.terms_) add(s, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.n_ != n_) throw InputError("indeterminate count mismatch");
  for (const auto& [s, c] : o.terms_) add(s, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(cplx c) {
  if (c == cplx(0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& [s, v] : terms_) v *= c;
  return *this;
}

Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
Polynomial operator*(cplx c, Polynomial a) { return a *= c; }

int product_sign(Support s, Support t, const AnticommGraph& g) {
  // Moving each t-index left past the larger s-indices; an equal index is met
  // last and cancels, so only strictly larger s-indices count.
  int parity = 0;
  Support rest = t;
  while (rest) {
    int j = __builtin_ctzll(rest);
    rest &= rest - 1;
    Support above = (j == 63) ? 0 : (~Support{0} << (j + 1));
    parity += popcount(s & above & g.row_word(j));
  }
  return (parity & 1) ? -1 : 1;
}

Monomial normal_form_product(const Monomial& s, const Monomial& t, const AnticommGraph& g) {
  if (g.n() > kMaxIndeterminates) throw InputError("too many indeterminates for the algebra");
  if (g.n() < 64 && ((s.support | t.support) >> g.n())) throw InputError("index out of range");
  return {s.support ^ t.support, s.sign * t.sign * product_sign(s.support, t.support, g)};
}

Polynomial multiply(const Polynomial& f, const Polynomial& g, const AnticommGraph& graph) {
  if (f.n() != g.n()) throw InputError("indeterminate count mismatch in product");
  if (graph.n() != f.n()) throw InputError("graph size does not match polynomial");
  Polynomial out(f.n());
  for (const auto& [s, a] : f.terms())
    for (const auto& [t, b] : g.terms()) out.add(s ^ t, static_cast<double>(product_sign(s, t, graph)) * a * b);
  return out;
}

int reversal_sign(Support s, const AnticommGraph& g) {
  // Reversing a word swaps every pair once.
  int parity = 0;
  Support rest = s;
  while (rest) {
    int j = __builtin_ctzll(rest);
    rest &= rest - 1;
    parity += popcount(rest & g.row_word(j));
  }
  return (parity & 1) ? -1 : 1;
}

Polynomial adjoint(const Polynomial& f, const AnticommGraph& g) {
  if (g.n() != f.n()) throw InputError("graph size does not match polynomial");
  Polynomial out(f.n());
  for (const auto& [s, a] : f.terms()) out.add(s, static_cast<double>(reversal_sign(s, g)) * std::conj(a));
  return out;
}

Polynomial commutator(const Polynomial& f, const Polynomial& g, const AnticommGraph& graph, bool anti) {
  Polynomial fg = multiply(f, g, graph);
  Polynomial gf = multiply(g, f, graph);
  return anti ? fg + gf : fg - gf;
}

double max_coeff_diff(const Polynomial& a, const Polynomial& b) {
  double m = 0;
  for (const auto& [s, c] : a.terms()) m = std::max(m, std::abs(c - b.coeff(s)));
  for (const auto& [s, c] : b.terms())
    if (!a.terms().count(s)) m = std::max(m, std::abs(c));
  return m;
}

bool is_self_adjoint(const Polynomial& h, const AnticommGraph& g, double tol) {
  return max_coeff_diff(adjoint(h, g), h) <= tol;
}

Polynomial embed(const Polynomial& f, int n_new) {
  if (n_new < f.n()) throw InputError("cannot embed into fewer indeterminates");
  Polynomial out(n_new);
  for (const auto& [s, c] : f.terms()) out.add(s, c);
  return out;
}

double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

std::uint64_t binom_u64(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
  return static_cast<std::uint64_t>(r);
}

cplx i_pow(int k) {
  switch (((k % 4) + 4) % 4) {
  case 0: return {1, 0};
  case 1: return {0, 1};
  case 2: return {-1, 0};
  default: return {0, -1};
  }
}

cplx i_pow_binom2(int q) { return i_pow(q * (q - 1) / 2); }

} // namespace fermiopt
