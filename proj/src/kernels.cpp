#include "fermiopt/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace fermiopt::kernels {

namespace scalar {

void parity_axpy(cplx* d, std::size_t len, std::uint64_t z, cplx c) {
  for (std::size_t b = 0; b < len; ++b) {
    if (__builtin_parityll(z & b))
      d[b] -= c;
    else
      d[b] += c;
  }
}

cplx cdot3(const cplx* a, const cplx* b, const cplx* c, std::size_t len) {
  cplx acc = 0;
  for (std::size_t k = 0; k < len; ++k) acc += a[k] * std::conj(b[k]) * c[k];
  return acc;
}

void pair_rotate(cplx* x, cplx* y, std::size_t len, double alpha, cplx beta, cplx gamma) {
  for (std::size_t k = 0; k < len; ++k) {
    cplx xv = x[k], yv = y[k];
    x[k] = alpha * xv + beta * yv;
    y[k] = alpha * yv + gamma * xv;
  }
}

} // namespace scalar

namespace {

struct Table {
  Isa isa;
  void (*parity_axpy)(cplx*, std::size_t, std::uint64_t, cplx);
  cplx (*cdot3)(const cplx*, const cplx*, const cplx*, std::size_t);
  void (*pair_rotate)(cplx*, cplx*, std::size_t, double, cplx, cplx);
};

Table make_table(Isa isa) {
#ifdef FERMIOPT_HAVE_AVX2
  if (isa == Isa::avx2) return {Isa::avx2, avx2::parity_axpy, avx2::cdot3, avx2::pair_rotate};
#endif
  (void)isa;
  return {Isa::scalar, scalar::parity_axpy, scalar::cdot3, scalar::pair_rotate};
}

Isa detect() {
  const char* env = std::getenv("FERMIOPT_SIMD");
  if (env && std::strcmp(env, "scalar") == 0) return Isa::scalar;
  return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

Table& table() {
  static Table t = make_table(detect());
  return t;
}

} // namespace

bool isa_available(Isa isa) {
  if (isa == Isa::scalar) return true;
#ifdef FERMIOPT_HAVE_AVX2
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa active_isa() { return table().isa; }

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void force_isa(Isa isa) {
  if (!isa_available(isa)) isa = Isa::scalar;
  table() = make_table(isa);
}

void parity_axpy(cplx* d, std::size_t len, std::uint64_t z, cplx c) { table().parity_axpy(d, len, z, c); }

cplx cdot3(const cplx* a, const cplx* b, const cplx* c, std::size_t len) { return table().cdot3(a, b, c, len); }

void pair_rotate(cplx* x, cplx* y, std::size_t len, double alpha, cplx beta, cplx gamma) {
  table().pair_rotate(x, y, len, alpha, beta, gamma);
}

} // namespace fermiopt::kernels
