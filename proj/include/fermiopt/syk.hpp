#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fermiopt/algebra.hpp"

namespace fermiopt {

struct SykInstance {
  std::string model = "custom"; // syk | syk2col | custom
  int n = 0;                    // total indeterminates, equals h.n()
  int q = 0;
  int n1 = 0;                   // first-color count, 2-colored only
  std::uint64_t seed = 0;
  Polynomial h;

  // chi-color count of a 2-colored instance.
  int n_chi() const { return n - n1; }
};

SykInstance sample_syk(int n, int q, std::uint64_t seed);
// Indeterminates phi_1..phi_{n1} are indices 0..n1-1, chi_1..chi_n follow.
SykInstance sample_2col(int n1, int n, std::uint64_t seed);

struct TwoColorSplit {
  Polynomial h_in;
  Polynomial h_out;
  double c = 0;
};

TwoColorSplit split_two_color(const SykInstance& inst);
double split_constant(int n);

struct HeuristicPrediction {
  double mu = 0;
  double support_edge = 0;
  double opt_estimate = 0;
};

// h_1 = (sum_j chi_{2j-1} chi_{2j})^* (sum_j chi_{2j-1} chi_{2j}); Opt = (n/2)^2.
Polynomial square_hamiltonian(int n);
// Degree-4 part of h_1 scaled to unit coefficient norm; Opt = sqrt(binom(n/2,2)).
Polynomial extremal_quartic(int n);

HeuristicPrediction heuristic_prediction(int n, int q);
// Sum over perfect matchings of [k] of mu^(crossings).
double mu_gaussian_moment(double mu, int k);

struct SpectralComparison {
  double mu = 0;
  double variance = 0;                    // tr(h^2)
  std::vector<double> empirical_moments;  // k = 1..max_moment, of h / sqrt(tr h^2)
  std::vector<double> mu_gaussian_moments;
};

SpectralComparison spectral_density_compare(const SykInstance& inst, int max_moment);

} // namespace fermiopt
