#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "fermiopt/algebra.hpp"

namespace fermiopt {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// i^phase * X^x Z^z on `qubits` qubits. Qubit k (first tensor factor is k=0)
// lives in bit (qubits-1-k), so basis index order matches Kronecker order.
struct PauliString {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  int phase = 0;
};

PauliString pauli_mul(const PauliString& a, const PauliString& b);
cplx pauli_phase(const PauliString& p);
CMatrix pauli_dense(const PauliString& p, int qubits);
// Single-qubit letter ('I','X','Y','Z') on qubit k.
PauliString pauli_letter(char letter, int k, int qubits);

struct DenseOperator {
  CMatrix mat;
  bool hermitian = false;

  Eigen::Index dim() const { return mat.rows(); }
  // Sets the flag after checking max |A - A*| <= 1e-12 (relative to max |A| when above 1).
  static DenseOperator hermitian_from(CMatrix m);
  static DenseOperator general(CMatrix m) { return {std::move(m), false}; }
};

double hermitian_defect(const CMatrix& m);

inline constexpr int kDefaultMajoranaCap = 28;

struct GraphReduction {
  int n = 0;      // indeterminates N
  int r = 0;      // half-rank over F2
  int s = 0;      // N - 2r
  int qubits = 0; // N - r
  std::vector<PauliString> generators;

  std::size_t dim() const { return std::size_t{1} << qubits; }
  CMatrix generator_matrix(int j) const { return pauli_dense(generators.at(j), qubits); }
};

GraphReduction build_gamma_representation(int n, int cap = kDefaultMajoranaCap);
GraphReduction reduce_graph_f2(const AnticommGraph& g, int cap = kDefaultMajoranaCap);
// Pauli string of chi^S (generators multiplied in ascending index order).
// Restriction to the sector where every isolated (central) variable acts as
// +1; this block is an irreducible representation of dimension 2^r.
CMatrix irreducible_block(const CMatrix& m, const GraphReduction& rep);
PauliString monomial_pauli(const GraphReduction& rep, Support s);
DenseOperator represent(const Polynomial& h, const GraphReduction& rep);

enum class EigMode { max, min, full };

struct EigenData {
  double lambda_max = 0;
  double lambda_min = 0;
  CVector v_max;
  CVector v_min;
  double residual_max = 0;
  double residual_min = 0;
  int multiplicity_max = 1;
  std::vector<double> spectrum; // ascending; full mode only
};

// Full Hermitian eigensolve up to dimension 4096, restarted Lanczos above.
EigenData eig_extremes(const DenseOperator& a, EigMode mode);
double opt_value(const Polynomial& h, const GraphReduction& rep);
double opt_pm(const Polynomial& h, const GraphReduction& rep);
// Opt over the fully anticommuting algebra K_n; odd n is padded with one
// unused Majorana so the gamma representation applies.
double opt_complete(const Polynomial& h);
GraphReduction complete_representation(int n);

// Largest |eigenvalue| of a Hermitian matrix.
double hermitian_norm(const CMatrix& m);

// e^{-theta zeta} rho e^{theta zeta} through the eigendecomposition of i*zeta.
DenseOperator skew_exponential_conjugate(const DenseOperator& zeta, double theta, const DenseOperator& rho);
// e^{-theta zeta} itself.
CMatrix skew_exponential(const DenseOperator& zeta, double theta);

// Debug export: <path>.bin holds row-major interleaved re/im doubles,
// <path>.json the header {dim, hermitian}.
void export_dense(const DenseOperator& a, const std::string& path);

} // namespace fermiopt
