#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>

// Hot inner loops with a scalar reference and an AVX2 variant. The variant
// is picked once at runtime from CPUID; FERMIOPT_SIMD=scalar in the
// environment pins the reference path.
namespace fermiopt::kernels {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

Isa active_isa();
const char* isa_name(Isa isa);
bool isa_available(Isa isa);
// Tests only; not synchronized with concurrent kernel calls.
void force_isa(Isa isa);

// d[b] += c * (-1)^popcount(z & b) for b in [0, len).
void parity_axpy(cplx* d, std::size_t len, std::uint64_t z, cplx c);
// sum_k a[k] * conj(b[k]) * c[k]
cplx cdot3(const cplx* a, const cplx* b, const cplx* c, std::size_t len);
// Simultaneous update x <- alpha*x + beta*y, y <- alpha*y + gamma*x.
void pair_rotate(cplx* x, cplx* y, std::size_t len, double alpha, cplx beta, cplx gamma);

namespace scalar {
void parity_axpy(cplx* d, std::size_t len, std::uint64_t z, cplx c);
cplx cdot3(const cplx* a, const cplx* b, const cplx* c, std::size_t len);
void pair_rotate(cplx* x, cplx* y, std::size_t len, double alpha, cplx beta, cplx gamma);
} // namespace scalar

#if defined(FERMIOPT_HAVE_AVX2) || defined(FERMIOPT_DECLARE_AVX2)
namespace avx2 {
void parity_axpy(cplx* d, std::size_t len, std::uint64_t z, cplx c);
cplx cdot3(const cplx* a, const cplx* b, const cplx* c, std::size_t len);
void pair_rotate(cplx* x, cplx* y, std::size_t len, double alpha, cplx beta, cplx gamma);
} // namespace avx2
#endif

} // namespace fermiopt::kernels
