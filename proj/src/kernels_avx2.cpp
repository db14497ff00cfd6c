#include "fermiopt/kernels.hpp"

#ifdef FERMIOPT_HAVE_AVX2

#include <immintrin.h>

namespace fermiopt::kernels::avx2 {

namespace {

// Two complex doubles per register: [re0, im0, re1, im1].
inline __m256d cmul(__m256d x, __m256d y) {
  __m256d yr = _mm256_movedup_pd(y);
  __m256d yi = _mm256_permute_pd(y, 0xF);
  __m256d xs = _mm256_permute_pd(x, 0x5);
  return _mm256_fmaddsub_pd(x, yr, _mm256_mul_pd(xs, yi));
}

inline __m256d conj(__m256d x) {
  return _mm256_xor_pd(x, _mm256_set_pd(-0.0, 0.0, -0.0, 0.0));
}

inline __m256d load(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

inline __m256i parity_to_signbit(__m256i v) {
  v = _mm256_xor_si256(v, _mm256_srli_epi64(v, 32));
  v = _mm256_xor_si256(v, _mm256_srli_epi64(v, 16));
  v = _mm256_xor_si256(v, _mm256_srli_epi64(v, 8));
  v = _mm256_xor_si256(v, _mm256_srli_epi64(v, 4));
  v = _mm256_xor_si256(v, _mm256_srli_epi64(v, 2));
  v = _mm256_xor_si256(v, _mm256_srli_epi64(v, 1));
  return _mm256_slli_epi64(v, 63);
}

} // namespace

void parity_axpy(cplx* d, std::size_t len, std::uint64_t z, cplx c) {
  const __m256d cv = _mm256_set_pd(c.imag(), c.real(), c.imag(), c.real());
  const __m256i zv = _mm256_set1_epi64x(static_cast<long long>(z));
  __m256i idx = _mm256_set_epi64x(1, 1, 0, 0);
  const __m256i step = _mm256_set1_epi64x(2);
  std::size_t b = 0;
  for (; b + 2 <= len; b += 2) {
    __m256i sign = parity_to_signbit(_mm256_and_si256(idx, zv));
    __m256d term = _mm256_xor_pd(cv, _mm256_castsi256_pd(sign));
    store(d + b, _mm256_add_pd(load(d + b), term));
    idx = _mm256_add_epi64(idx, step);
  }
  for (; b < len; ++b) d[b] += __builtin_parityll(z & b) ? -c : c;
}

cplx cdot3(const cplx* a, const cplx* b, const cplx* c, std::size_t len) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= len; k += 4) {
    acc0 = _mm256_add_pd(acc0, cmul(cmul(load(a + k), conj(load(b + k))), load(c + k)));
    acc1 = _mm256_add_pd(acc1, cmul(cmul(load(a + k + 2), conj(load(b + k + 2))), load(c + k + 2)));
  }
  for (; k + 2 <= len; k += 2) acc0 = _mm256_add_pd(acc0, cmul(cmul(load(a + k), conj(load(b + k))), load(c + k)));
  acc0 = _mm256_add_pd(acc0, acc1);
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc0);
  cplx out(lanes[0] + lanes[2], lanes[1] + lanes[3]);
  for (; k < len; ++k) out += a[k] * std::conj(b[k]) * c[k];
  return out;
}

void pair_rotate(cplx* x, cplx* y, std::size_t len, double alpha, cplx beta, cplx gamma) {
  const __m256d av = _mm256_set1_pd(alpha);
  const __m256d bv = _mm256_set_pd(beta.imag(), beta.real(), beta.imag(), beta.real());
  const __m256d gv = _mm256_set_pd(gamma.imag(), gamma.real(), gamma.imag(), gamma.real());
  std::size_t k = 0;
  for (; k + 2 <= len; k += 2) {
    __m256d xv = load(x + k), yv = load(y + k);
    store(x + k, _mm256_fmadd_pd(av, xv, cmul(bv, yv)));
    store(y + k, _mm256_fmadd_pd(av, yv, cmul(gv, xv)));
  }
  for (; k < len; ++k) {
    cplx xv = x[k], yv = y[k];
    x[k] = alpha * xv + beta * yv;
    y[k] = alpha * yv + gamma * xv;
  }
}

} // namespace fermiopt::kernels::avx2

#endif
