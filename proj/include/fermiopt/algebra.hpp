#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace fermiopt {

using cplx = std::complex<double>;

// Monomial supports are bitmasks over 0-based indeterminate indices. Numeric
// order of masks is colexicographic order of the subsets, which is the
// canonical ordering used for coefficients everywhere in the library.
using Support = std::uint64_t;
inline constexpr int kMaxIndeterminates = 64;

inline int popcount(Support s) { return __builtin_popcountll(s); }
Support support_of(const std::vector<int>& indices);
std::vector<int> indices_of(Support s);
// Next subset of the same size in colex order (Gosper); 0 when exhausted
// within the first n indices.
Support next_subset(Support s, int n);
Support first_subset(int q);
std::vector<Support> subsets_colex(int n, int q);

// Simple graph on n vertices with bitset rows. Used both as the
// anticommutation graph of the algebra and as a plain graph by kneser.
class AnticommGraph {
public:
  AnticommGraph() = default;
  explicit AnticommGraph(int n);

  static AnticommGraph complete(int n);
  static AnticommGraph empty(int n) { return AnticommGraph(n); }
  static AnticommGraph cycle(int n);
  static AnticommGraph matching(int pairs);
  // 0-based edge list.
  static AnticommGraph from_edges(int n, const std::vector<std::pair<int, int>>& edges);

  int n() const { return n_; }
  int words() const { return words_; }
  bool has_edge(int j, int k) const {
    return (rows_[static_cast<std::size_t>(j) * words_ + (k >> 6)] >> (k & 63)) & 1ULL;
  }
  void add_edge(int j, int k);
  const std::uint64_t* row(int j) const { return rows_.data() + static_cast<std::size_t>(j) * words_; }
  // First 64 columns of row j; the whole row when n <= 64.
  std::uint64_t row_word(int j) const { return rows_[static_cast<std::size_t>(j) * words_]; }
  int degree(int j) const;
  std::size_t edge_count() const;
  std::vector<std::pair<int, int>> edges() const;
  bool is_complete() const;

private:
  int n_ = 0;
  int words_ = 0;
  std::vector<std::uint64_t> rows_;
};

struct Monomial {
  Support support = 0;
  int sign = 1;
};

class Polynomial {
public:
  explicit Polynomial(int n = 0) : n_(n) {}
  static Polynomial scalar(int n, cplx c);
  static Polynomial monomial(int n, Support s, cplx c = 1.0);
  // Real linear form sum_j a_j chi_j.
  static Polynomial linear(const std::vector<double>& a);

  int n() const { return n_; }
  const std::map<Support, cplx>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  // Adds c to the coefficient of s; entries that become exactly zero are removed.
  void add(Support s, cplx c);
  void set(Support s, cplx c);
  cplx coeff(Support s) const;
  cplx trace() const { return coeff(0); }
  int degree() const;
  bool is_homogeneous(int q) const;
  double coeff_norm2() const;

  Polynomial chopped(double tol) const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(cplx c);

private:
  int n_;
  std::map<Support, cplx> terms_;
};

Polynomial operator+(Polynomial a, const Polynomial& b);
Polynomial operator-(Polynomial a, const Polynomial& b);
Polynomial operator*(cplx c, Polynomial a);

// +1 or -1 such that chi^s chi^t = sign * chi^(s xor t) over g.
int product_sign(Support s, Support t, const AnticommGraph& g);
Monomial normal_form_product(const Monomial& s, const Monomial& t, const AnticommGraph& g);
Polynomial multiply(const Polynomial& f, const Polynomial& g, const AnticommGraph& graph);
// Sign with (chi^s)* = sign * chi^s.
int reversal_sign(Support s, const AnticommGraph& g);
Polynomial adjoint(const Polynomial& f, const AnticommGraph& g);
Polynomial commutator(const Polynomial& f, const Polynomial& g, const AnticommGraph& graph, bool anti = false);

// max |coefficient difference|
double max_coeff_diff(const Polynomial& a, const Polynomial& b);
bool is_self_adjoint(const Polynomial& h, const AnticommGraph& g, double tol = 1e-12);

// Same coefficients over a larger indeterminate count (n_new >= n).
Polynomial embed(const Polynomial& f, int n_new);

double binom(int n, int k);
std::uint64_t binom_u64(int n, int k);

// i^(binom(q,2)) as an exact complex unit.
cplx i_pow_binom2(int q);
cplx i_pow(int k);

} // namespace fermiopt
