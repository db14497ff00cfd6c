#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "fermiopt/algebra.hpp"
#include "fermiopt/repr.hpp"
#include "fermiopt/syk.hpp"

namespace fermiopt {

inline constexpr int kVariationalMajoranaCap = 24;

// Eigenbasis of K = i*zeta with rho0 already rotated into it; shared by
// every sweep over the same setup.
// Eigenvectors of i*zeta are V = vecs (x) I_copies.
struct ZetaSpectrum {
  Eigen::VectorXd lambda;
  CMatrix vecs;
  Eigen::Index copies = 1;
  CMatrix rho_t; // (V* rho0 V)^T, so row j of the rotated state is column j here
};

// Layout: phi_1..phi_{n1} at 0..n1-1, sigma_1..sigma_n at n1..n1+n-1, then
// chi_1..chi_n starting at `block`. Unused Majoranas pad phi+sigma and the
// total to even counts, so zeta acts on the leading qubits only.
// Polynomials with fewer than `total` indeterminates are read in instance
// order (phi, then chi) and moved into this layout.
struct VariationalSetup {
  int n1 = 0;
  int n = 0;
  int block = 0; // phi, sigma and padding
  int total = 0; // Majoranas in the representation (even)
  GraphReduction rep;
  DenseOperator rho0;
  DenseOperator zeta;
  Polynomial zeta_poly;
  std::vector<Polynomial> taus; // over `total` indeterminates
  Polynomial h;                 // the instance embedded into `total`
  double first_order = 0;
  std::shared_ptr<const ZetaSpectrum> spectrum;

  int sigma(int m) const { return n1 + m; }
  int chi(int m) const { return block + m; }
};

// inst is a 2-colored instance: n1 first-color indices, inst.n_chi() second.
VariationalSetup prepare_reference(const SykInstance& inst);

// tr(rho_theta h) with rho_theta = e^{-theta zeta} rho0 e^{theta zeta}. h may
// live on any indeterminate count up to setup.total.
double conjugated_value(const VariationalSetup& setup, const Polynomial& h, double theta);

struct SweepResult {
  double best_theta = 0;
  double best_value = 0;
  std::vector<std::pair<double, double>> curve;
};

std::vector<double> default_theta_grid();
// Parses "lo:hi:count".
std::vector<double> parse_theta_grid(const std::string& spec);
SweepResult theta_sweep(const VariationalSetup& setup, const Polynomial& h, const std::vector<double>& grid);

struct BchResidual {
  double lhs = 0;
  double bound = 0;
};

BchResidual bch_residual(const VariationalSetup& setup, const Polynomial& h, double theta);

// First-order product formula for e^{-theta zeta}, terms in colex order.
CMatrix trotter_unitary(const VariationalSetup& setup, double theta, int steps);
DenseOperator trotter_state(const VariationalSetup& setup, double theta, int steps);

struct TrotterReport {
  double value_trotter = 0;
  double value_exact = 0;
  // tr(rho_T rho_theta) / tr(rho_theta^2)
  double fidelity = 0;
};

TrotterReport trotter_compare(const VariationalSetup& setup, const Polynomial& h, double theta, int steps);

// Applies cos(angle) - i sin(angle) P to the rows of a row-major matrix.
using RowCMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
void apply_pauli_rotation(RowCMatrix& u, const PauliString& p, double angle);

struct PipelineResult {
  double value = 0;
  double theta = 0;
  std::map<std::string, double> report;
};

// Full SYK_4 instance, n divisible by 4. The seed only labels the run; the
// construction is deterministic in the instance.
PipelineResult witness_pipeline(const SykInstance& inst, std::uint64_t seed);

// Normalized trace of a dense operator.
double normalized_trace(const CMatrix& m);

} // namespace fermiopt
