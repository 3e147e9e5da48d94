#include "sfq/kernels.hpp"

#include <cstdlib>
#include <stdexcept>

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#endif

namespace sfq::kernels {

void matvec_scalar(cx* y, const cx* a, const cx* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        cx acc{0.0, 0.0};
        const cx* row = a + i * n;
        for (std::size_t j = 0; j < n; ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
}

void matmul_scalar(cx* c, const cx* a, const cx* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        cx* crow = c + i * n;
        for (std::size_t j = 0; j < n; ++j) crow[j] = cx{0.0, 0.0};
        for (std::size_t k = 0; k < n; ++k) {
            const cx aik = a[i * n + k];
            const cx* brow = b + k * n;
            for (std::size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
        }
    }
}

#if defined(__x86_64__) || defined(_M_X64)

// Two interleaved complex doubles per 256-bit lane. For each product we
// split x into duplicated real/imag parts and use fmaddsub to get
// (ar*br - ai*bi, ar*bi + ai*br) in one shot.
static inline __m256d cmul_acc(__m256d acc, __m256d va, __m256d vx) {
    __m256d xre = _mm256_movedup_pd(vx);            // [cr cr dr dr]
    __m256d xim = _mm256_permute_pd(vx, 0xF);       // [ci ci di di]
    __m256d aswap = _mm256_permute_pd(va, 0x5);     // [ai ar bi br]
    __m256d t = _mm256_mul_pd(aswap, xim);
    return _mm256_add_pd(acc, _mm256_fmaddsub_pd(va, xre, t));
}

void matvec_avx2(cx* y, const cx* a, const cx* x, std::size_t n) {
    const double* xd = reinterpret_cast<const double*>(x);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = reinterpret_cast<const double*>(a + i * n);
        __m256d acc = _mm256_setzero_pd();
        std::size_t j = 0;
        for (; j + 2 <= n; j += 2) {
            __m256d va = _mm256_loadu_pd(row + 2 * j);
            __m256d vx = _mm256_loadu_pd(xd + 2 * j);
            acc = cmul_acc(acc, va, vx);
        }
        double buf[4];
        _mm256_storeu_pd(buf, acc);
        cx s{buf[0] + buf[2], buf[1] + buf[3]};
        for (; j < n; ++j) s += a[i * n + j] * x[j];
        y[i] = s;
    }
}

void matmul_avx2(cx* c, const cx* a, const cx* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double* crow = reinterpret_cast<double*>(c + i * n);
        for (std::size_t j = 0; j < 2 * n; ++j) crow[j] = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const cx aik = a[i * n + k];
            __m256d are = _mm256_set1_pd(aik.real());
            __m256d aim = _mm256_set1_pd(aik.imag());
            const double* brow = reinterpret_cast<const double*>(b + k * n);
            std::size_t j = 0;
            for (; j + 2 <= n; j += 2) {
                __m256d vb = _mm256_loadu_pd(brow + 2 * j);
                __m256d bswap = _mm256_permute_pd(vb, 0x5);
                __m256d vc = _mm256_loadu_pd(crow + 2 * j);
                vc = _mm256_add_pd(vc, _mm256_fmaddsub_pd(vb, are, _mm256_mul_pd(bswap, aim)));
                _mm256_storeu_pd(crow + 2 * j, vc);
            }
            for (; j < n; ++j) {
                cx t = aik * b[k * n + j];
                crow[2 * j] += t.real();
                crow[2 * j + 1] += t.imag();
            }
        }
    }
}

#endif  // x86_64

namespace {

Backend detect() {
    if (const char* env = std::getenv("SFQ_KERNEL")) {
        std::string v{env};
        if (v == "scalar") return Backend::Scalar;
        if (v == "avx2") return Backend::Avx2;
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
        return Backend::Avx2;
#endif
    return Backend::Scalar;
}

Backend g_backend = detect();

}  // namespace

Backend active_backend() { return g_backend; }

std::string backend_name() {
    return g_backend == Backend::Avx2 ? "avx2" : "scalar";
}

void force_backend(Backend b) {
#if !defined(__x86_64__) && !defined(_M_X64)
    if (b == Backend::Avx2) throw std::runtime_error("avx2 backend not built");
#endif
    g_backend = b;
}

void matvec(cx* y, const cx* a, const cx* x, std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
    if (g_backend == Backend::Avx2) {
        matvec_avx2(y, a, x, n);
        return;
    }
#endif
    matvec_scalar(y, a, x, n);
}

void matmul(cx* c, const cx* a, const cx* b, std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
    if (g_backend == Backend::Avx2) {
        matmul_avx2(c, a, b, n);
        return;
    }
#endif
    matmul_scalar(c, a, b, n);
}

}  // namespace sfq::kernels
