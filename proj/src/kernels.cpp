#include "calr/kernels.hpp"

#include <cstdlib>
#include <cstring>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define CALR_X86 1
#else
#define CALR_X86 0
#endif

namespace calr::kernels {

double l2sq_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

void sum_sumsq_scalar(const double* x, std::size_t n, double& sum, double& sumsq) {
    double s = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += x[i];
        sq += x[i] * x[i];
    }
    sum = s;
    sumsq = sq;
}

#if CALR_X86

__attribute__((target("avx2,fma")))
double l2sq_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
        acc0 = _mm256_fmadd_pd(d0, d0, acc0);
        acc1 = _mm256_fmadd_pd(d1, d1, acc1);
    }
    if (i + 4 <= n) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc0 = _mm256_fmadd_pd(d, d, acc0);
        i += 4;
    }
    const __m256d acc = _mm256_add_pd(acc0, acc1);
    const __m128d lo = _mm256_castpd256_pd128(acc);
    const __m128d hi = _mm256_extractf128_pd(acc, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    double out = _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        out += d * d;
    }
    return out;
}

__attribute__((target("avx2,fma")))
void sum_sumsq_avx2(const double* x, std::size_t n, double& sum, double& sumsq) {
    __m256d s0 = _mm256_setzero_pd();
    __m256d s1 = _mm256_setzero_pd();
    __m256d q0 = _mm256_setzero_pd();
    __m256d q1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d v0 = _mm256_loadu_pd(x + i);
        const __m256d v1 = _mm256_loadu_pd(x + i + 4);
        s0 = _mm256_add_pd(s0, v0);
        s1 = _mm256_add_pd(s1, v1);
        q0 = _mm256_fmadd_pd(v0, v0, q0);
        q1 = _mm256_fmadd_pd(v1, v1, q1);
    }
    if (i + 4 <= n) {
        const __m256d v = _mm256_loadu_pd(x + i);
        s0 = _mm256_add_pd(s0, v);
        q0 = _mm256_fmadd_pd(v, v, q0);
        i += 4;
    }
    const __m256d sv = _mm256_add_pd(s0, s1);
    const __m128d s_pair = _mm_add_pd(_mm256_castpd256_pd128(sv), _mm256_extractf128_pd(sv, 1));
    double s = _mm_cvtsd_f64(_mm_add_sd(s_pair, _mm_unpackhi_pd(s_pair, s_pair)));
    const __m256d qv = _mm256_add_pd(q0, q1);
    const __m128d q_pair = _mm_add_pd(_mm256_castpd256_pd128(qv), _mm256_extractf128_pd(qv, 1));
    double q = _mm_cvtsd_f64(_mm_add_sd(q_pair, _mm_unpackhi_pd(q_pair, q_pair)));
    for (; i < n; ++i) {
        s += x[i];
        q += x[i] * x[i];
    }
    sum = s;
    sumsq = q;
}

bool avx2_available() { return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"); }

#else

bool avx2_available() { return false; }

#endif // CALR_X86

namespace {

SimdMode g_requested = SimdMode::Auto;

SimdMode env_mode() {
    static const SimdMode cached = [] {
        const char* env = std::getenv("CALR_SIMD");
        if (env == nullptr) return SimdMode::Auto;
        if (std::strcmp(env, "scalar") == 0) return SimdMode::Scalar;
        if (std::strcmp(env, "avx2") == 0) return SimdMode::Avx2;
        return SimdMode::Auto;
    }();
    return cached;
}

SimdMode resolve() {
    SimdMode m = g_requested;
    if (m == SimdMode::Auto) m = env_mode();
    if (m == SimdMode::Auto) m = avx2_available() ? SimdMode::Avx2 : SimdMode::Scalar;
    if (m == SimdMode::Avx2 && !avx2_available()) m = SimdMode::Scalar;
    return m;
}

} // namespace

void set_simd_mode(SimdMode mode) { g_requested = mode; }

SimdMode active_simd_mode() { return resolve(); }

double l2sq(const double* a, const double* b, std::size_t n) {
#if CALR_X86
    if (resolve() == SimdMode::Avx2) return l2sq_avx2(a, b, n);
#endif
    return l2sq_scalar(a, b, n);
}

void sum_sumsq(const double* x, std::size_t n, double& sum, double& sumsq) {
#if CALR_X86
    if (resolve() == SimdMode::Avx2) {
        sum_sumsq_avx2(x, n, sum, sumsq);
        return;
    }
#endif
    sum_sumsq_scalar(x, n, sum, sumsq);
}

} // namespace calr::kernels
