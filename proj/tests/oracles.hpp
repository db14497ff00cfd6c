#pragma once

// Reference implementations used only by tests. They are deliberately
// naive and share no code with the library paths they check.

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <cstdint>
#include <vector>

#include "fermiopt/algebra.hpp"

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline Mat pauli(char c) {
  Mat m = Mat::Zero(2, 2);
  switch (c) {
  case 'I': m << 1, 0, 0, 1; break;
  case 'X': m << 0, 1, 1, 0; break;
  case 'Y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
  case 'Z': m << 1, 0, 0, -1; break;
  }
  return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// gamma_{2k+1} = Z^{k} X I..., gamma_{2k+2} = Z^{k} Y I... (0-based j = 2k, 2k+1).
inline std::vector<Mat> gammas(int n) {
  const int q = n / 2;
  std::vector<Mat> out;
  for (int j = 0; j < n; ++j) {
    Mat m = Mat::Identity(1, 1);
    for (int k = 0; k < q; ++k) {
      char c = k < j / 2 ? 'Z' : (k == j / 2 ? (j % 2 ? 'Y' : 'X') : 'I');
      m = kron(m, pauli(c));
    }
    out.push_back(m);
  }
  return out;
}

inline Mat dense(const fermiopt::Polynomial& h, const std::vector<Mat>& g) {
  const Eigen::Index d = g.at(0).rows();
  Mat out = Mat::Zero(d, d);
  for (const auto& [s, c] : h.terms()) {
    Mat m = Mat::Identity(d, d);
    for (int j = 0; j < h.n(); ++j)
      if ((s >> j) & 1) m = m * g[j];
    out += c * m;
  }
  return out;
}

// chi^S chi^T by bubble sort of the concatenated index word: every swap of
// two distinct adjacent letters costs -1 when they anticommute in g, then
// equal neighbours cancel.
inline std::pair<fermiopt::Support, int> word_product(fermiopt::Support s, fermiopt::Support t,
                                                      const fermiopt::AnticommGraph& g) {
  std::vector<int> w = fermiopt::indices_of(s);
  for (int j : fermiopt::indices_of(t)) w.push_back(j);
  int sign = 1;
  for (std::size_t pass = 0; pass < w.size(); ++pass)
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
      if (w[i] > w[i + 1]) {
        if (g.has_edge(w[i], w[i + 1])) sign = -sign;
        std::swap(w[i], w[i + 1]);
      }
  fermiopt::Support out = 0;
  for (int j : w) out ^= fermiopt::Support{1} << j;
  return {out, sign};
}

inline double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace oracle
