#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fermiopt/algebra.hpp"

namespace fermiopt {

// Antisymmetric 4-index coefficient tensor of a degree-4 Hamiltonian.
struct JTensor {
  int n = 0;
  std::map<Support, double> coeffs; // J_S for sorted supports
  Eigen::MatrixXd jmat;             // row i*n+j, column k*n+l

  double at(int i, int j, int k, int l) const { return jmat(i * n + j, k * n + l); }
};

JTensor build_jtensor(const Polynomial& h);

struct CertificateReport {
  std::string method;
  std::string side = "upper";  // upper | lower
  std::string target = "Opt";  // quantity bounded: Opt, E[Opt], SOS4
  double bound = 0;
  std::optional<int> sos_degree;
  std::map<std::string, double> evidence;
  std::string note;
  Polynomial pseudostate;      // lower reports that carry rho
};

CertificateReport chernoff_moment_bound(int n, int q);
CertificateReport schatten4_certificate(const Polynomial& h);
CertificateReport tau_triangular_certificate(const Polynomial& h);
CertificateReport fragment42_certificate(const Polynomial& h);
CertificateReport fooling_pseudostate(const Polynomial& h);

// sum_m tau_m^2 for tau_m = (i sqrt(n)/8)[h, chi_m], computed by direct squaring.
Polynomial commutator_tau_square_symbolic(const Polynomial& h);
// The same quantity from (J^mat)^2 and the scalar n|a|^2/4.
Polynomial commutator_tau_square_matrix(const Polynomial& h);
// Triangular tau_m = i sqrt(n) sum_{T below m} J_{T+m} chi^T.
std::vector<Polynomial> triangular_taus(const Polynomial& h);
Polynomial triangular_tau_square_symbolic(const Polynomial& h);
Polynomial triangular_tau_square_fast(const Polynomial& h);

struct CalibrationReport {
  bool passed = false;
  double max_commutator_diff = 0;
  double max_triangular_diff = 0;
  double max_reconstruction_diff = 0;
  std::vector<int> sizes;
};

// Runs the matrix-form vs symbolic-form comparison at n = 8, 10, 12.
CalibrationReport run_calibration_self_test();
// Runs the self-test once per process; throws InvariantError if it failed.
const CalibrationReport& ensure_calibrated();

struct MomentCheck {
  bool is_psd = false;
  double min_eig = 0;
  std::vector<std::string> violated_linear_constraints;
  int rows = 0;
};

// Rows chi^S with |S| <= k; M_{S,T} = E[(chi^S)* chi^T].
MomentCheck moment_matrix_check(const std::map<Support, cplx>& values, int k, const AnticommGraph& g);
// Rows chi^S (|S| <= 2) followed by tau_1..tau_n of the commutator form for h.
// M02 entries come from `m02` when supplied, otherwise from degree-6 values.
MomentCheck moment_matrix_check_fragment(const std::map<Support, cplx>& values, const Polynomial& h,
                                         const std::optional<Eigen::MatrixXcd>& m02 = std::nullopt);

// Functional values tr(rho chi^S) of a polynomial pseudostate rho (trace-normalized),
// listed for every support of size <= max_degree.
std::map<Support, cplx> functional_values(const Polynomial& rho, const AnticommGraph& g, int max_degree);

double operator_norm_symmetric(const Eigen::MatrixXd& m);

} // namespace fermiopt
