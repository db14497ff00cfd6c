#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fermiopt/algebra.hpp"

namespace fermiopt {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct SchemeGraph {
  int n = 0;
  int q = 0;
  std::vector<int> nonedge_distances; // subset of {1..q}

  static SchemeGraph even(int n, int q);
  // EKR: S,T adjacent iff |S cap T| < k, i.e. nonedges at distances 1..q-k.
  static SchemeGraph ekr(int n, int q, int k);
  bool is_nonedge(int d) const;
};

// q-subsets of [n] in lexicographic order of their sorted index lists.
std::vector<Support> lex_subsets(int n, int q);
// Vertex v is lex_subsets(n, q)[v].
AnticommGraph build_kg_graph(const SchemeGraph& sg);

enum class IndependentVariant { def1, fano8 };
std::vector<Support> construct_independent_set(int n, int q, IndependentVariant variant);

int alpha_exact(const AnticommGraph& g);
std::vector<int> maximum_independent_set(const AnticommGraph& g);
bool is_independent(const AnticommGraph& g, const std::vector<int>& set);

BigInt dual_hahn_exact(int n, int q, int d, int z);
double dual_hahn_eigenvalue(int n, int q, int d, int z);

struct ThetaCertificate {
  double theta_value = 0;
  std::map<int, double> multipliers;     // e -> c_e for e outside D
  std::vector<double> p_values;          // p(0..q)
  std::vector<int> tight_constraints;    // z in 1..q with p(z) = 0
  bool exact = false;                    // rational arithmetic used
  std::string theta_exact;               // "num/den" in rational mode
  std::map<int, std::string> multipliers_exact;
  int ties = 0;                          // other optimal vertices found
};

ThetaCertificate delsarte_theta(const SchemeGraph& sg);
ThetaCertificate theta4_closed_form(int n);
// Product bound prod_j (n - q + d_j) / d_j over the nonedge distances.
double def_product_bound(const SchemeGraph& sg);

double theta_transitive(const AnticommGraph& g);

struct PsiResult {
  std::vector<double> best_a;
  double best_value = 0;
  double independent_start_value = 0;
  std::vector<double> trial_values; // one per random start
};

PsiResult psi_local_search(const AnticommGraph& g, int trials, std::uint64_t seed);

struct LocalOptResult {
  double grad_norm = 0;
  double hessian_max_eig = 0;
  double value = 0;            // lambda_max at a_0
  int top_multiplicity = 1;
  bool maximal = true;         // false raises the advisory warning
  std::string status = "ok";   // ok | degenerate_top
  std::vector<double> a0;
};

// S holds 0-based vertex indices.
LocalOptResult local_opt_check(const AnticommGraph& g, const std::vector<int>& s);

} // namespace fermiopt
