#include "fermiopt/syk.hpp"

#include <cmath>
#include <functional>

#include "fermiopt/errors.hpp"
#include "fermiopt/repr.hpp"
#include "fermiopt/rng.hpp"

namespace fermiopt {

SykInstance sample_syk(int n, int q, std::uint64_t seed) {
  if (q < 1 || q > n) throw InputError("sample_syk needs 1 <= q <= n");
  if (n > kMaxIndeterminates) throw ResourceError("n above 64 indeterminates");
  const auto supports = subsets_colex(n, q);
  if (supports.size() > 5'000'000) throw ResourceError("too many coefficients");
  CounterRng rng("syk", seed, (static_cast<std::uint64_t>(n) << 32) | static_cast<std::uint64_t>(q));
  const double scale = 1.0 / std::sqrt(static_cast<double>(supports.size()));
  const cplx phase = i_pow_binom2(q);
  SykInstance inst;
  inst.model = "syk";
  inst.n = n;
  inst.q = q;
  inst.seed = seed;
  inst.h = Polynomial(n);
  for (std::size_t t = 0; t < supports.size(); ++t) inst.h.add(supports[t], phase * (scale * rng.normal(t)));
  return inst;
}

SykInstance sample_2col(int n1, int n, std::uint64_t seed) {
  if (n1 < 3 || n1 % 2) throw InputError("sample_2col needs an even n1 >= 4");
  if (n < 1) throw InputError("sample_2col needs n >= 1");
  if (n1 + n > kMaxIndeterminates) throw ResourceError("n1 + n above 64 indeterminates");
  const auto triples = subsets_colex(n1, 3);
  const double nb = static_cast<double>(triples.size());
  CounterRng rng("syk2col", seed, (static_cast<std::uint64_t>(n1) << 32) | static_cast<std::uint64_t>(n));
  // (i/sqrt n) * (i/sqrt binom) J phi^S chi_m
  const double scale = -1.0 / std::sqrt(n * nb);
  SykInstance inst;
  inst.model = "syk2col";
  inst.n = n1 + n;
  inst.q = 4;
  inst.n1 = n1;
  inst.seed = seed;
  inst.h = Polynomial(n1 + n);
  for (int m = 0; m < n; ++m) {
    const Support chi = Support{1} << (n1 + m);
    for (std::size_t t = 0; t < triples.size(); ++t)
      inst.h.add(triples[t] | chi, scale * rng.normal(static_cast<std::uint64_t>(m) * triples.size() + t));
  }
  return inst;
}

double split_constant(int n) {
  return std::sqrt(binom(n, 4) / (binom(3 * n / 4, 3) * (n / 4)));
}

TwoColorSplit split_two_color(const SykInstance& inst) {
  const int n = inst.n;
  if (n % 4) throw InputError("split_two_color needs n divisible by 4");
  if (!inst.h.is_homogeneous(4)) throw InputError("split_two_color needs a homogeneous degree-4 instance");
  const Support first = (Support{1} << (3 * n / 4)) - 1;
  TwoColorSplit out{Polynomial(n), Polynomial(n), split_constant(n)};
  for (const auto& [s, c] : inst.h.terms()) {
    if (popcount(s & first) == 3)
      out.h_in.add(s, c);
    else
      out.h_out.add(s, c);
  }
  return out;
}

HeuristicPrediction heuristic_prediction(int n, int q) {
  if (q < 1 || q > n) throw InputError("heuristic_prediction needs 1 <= q <= n");
  HeuristicPrediction out;
  const double total = binom(n, q);
  for (int k = 0; k <= q; ++k) {
    double p = binom(q, k) * binom(n - q, q - k) / total;
    out.mu += ((q - k) % 2 ? -p : p);
  }
  out.support_edge = 2.0 / std::sqrt(1.0 - out.mu);
  out.opt_estimate = out.support_edge;
  return out;
}

double mu_gaussian_moment(double mu, int k) {
  if (k < 0 || k > 16) throw InputError("moment order out of range");
  if (k % 2) return 0.0;
  std::vector<int> partner(k, -1);
  double total = 0;
  std::function<void()> rec = [&]() {
    int i = 0;
    while (i < k && partner[i] >= 0) ++i;
    if (i == k) {
      int crossings = 0;
      for (int a = 0; a < k; ++a)
        for (int c = a + 1; c < k; ++c) {
          int b = partner[a], d = partner[c];
          if (a < b && c < d && a < c && c < b && b < d) ++crossings;
        }
      total += std::pow(mu, crossings);
      return;
    }
    for (int j = i + 1; j < k; ++j) {
      if (partner[j] >= 0) continue;
      partner[i] = j;
      partner[j] = i;
      rec();
      partner[i] = partner[j] = -1;
    }
  };
  rec();
  return total;
}

SpectralComparison spectral_density_compare(const SykInstance& inst, int max_moment) {
  if (max_moment < 2 || max_moment > 12 || max_moment % 2) throw InputError("max_moment must be even in [2, 12]");
  SpectralComparison out;
  out.mu = heuristic_prediction(inst.n, inst.q).mu;
  GraphReduction rep = complete_representation(inst.n);
  EigenData ed = eig_extremes(represent(embed(inst.h, rep.n), rep), EigMode::full);
  const double dim = static_cast<double>(ed.spectrum.size());
  for (double l : ed.spectrum) out.variance += l * l / dim;
  const double sd = std::sqrt(out.variance);
  for (int k = 1; k <= max_moment; ++k) {
    double m = 0;
    for (double l : ed.spectrum) m += std::pow(l / sd, k);
    out.empirical_moments.push_back(m / dim);
    out.mu_gaussian_moments.push_back(mu_gaussian_moment(out.mu, k));
  }
  return out;
}

Polynomial square_hamiltonian(int n) {
  if (n % 2 || n < 2) throw InputError("square Hamiltonian needs even n >= 2");
  const AnticommGraph g = AnticommGraph::complete(n);
  Polynomial pairs(n);
  for (int j = 0; j + 1 < n; j += 2) pairs.add(Support{3} << j, 1.0);
  return multiply(adjoint(pairs, g), pairs, g);
}

Polynomial extremal_quartic(int n) {
  if (n < 4) throw InputError("extremal quartic needs n >= 4");
  Polynomial h = square_hamiltonian(n);
  h.set(0, 0.0);
  h *= 1.0 / std::sqrt(h.coeff_norm2());
  return h;
}

} // namespace fermiopt
