#ifndef SFQ_KERNELS_HPP
#define SFQ_KERNELS_HPP

#include <complex>
#include <cstddef>
#include <string>

namespace sfq::kernels {

using cx = std::complex<double>;

// y = A x, A row-major n x n
void matvec_scalar(cx* y, const cx* a, const cx* x, std::size_t n);
// C = A B, all row-major n x n; C must not alias A or B
void matmul_scalar(cx* c, const cx* a, const cx* b, std::size_t n);

#if defined(__x86_64__) || defined(_M_X64)
void matvec_avx2(cx* y, const cx* a, const cx* x, std::size_t n);
void matmul_avx2(cx* c, const cx* a, const cx* b, std::size_t n);
#endif

enum class Backend { Scalar, Avx2 };

Backend active_backend();
std::string backend_name();
// Overrides runtime detection; used by equivalence tests and the
// SFQ_KERNEL=scalar|avx2 environment switch.
void force_backend(Backend b);

void matvec(cx* y, const cx* a, const cx* x, std::size_t n);
void matmul(cx* c, const cx* a, const cx* b, std::size_t n);

}  // namespace sfq::kernels

#endif
