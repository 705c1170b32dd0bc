#pragma once

#include <cstddef>

// Data-parallel inner loops shared by the index builder, the k-NN
// classifier and the normalizer. Each kernel has a scalar reference
// implementation and an AVX2 variant; the dispatched entry points pick
// one at startup based on the CPU (override with set_simd_mode or the
// CALR_SIMD environment variable: "auto", "scalar", "avx2").
namespace calr::kernels {

enum class SimdMode { Auto, Scalar, Avx2 };

bool avx2_available();
void set_simd_mode(SimdMode mode);
SimdMode active_simd_mode();

// Squared Euclidean distance between two length-n vectors.
double l2sq(const double* a, const double* b, std::size_t n);

// One-pass sum and sum of squares of a length-n vector.
void sum_sumsq(const double* x, std::size_t n, double& sum, double& sumsq);

// Reference and vector variants, exposed so equivalence tests can pin
// them against each other regardless of the dispatched choice.
double l2sq_scalar(const double* a, const double* b, std::size_t n);
void sum_sumsq_scalar(const double* x, std::size_t n, double& sum, double& sumsq);

#if defined(__x86_64__) || defined(__i386__)
double l2sq_avx2(const double* a, const double* b, std::size_t n);
void sum_sumsq_avx2(const double* x, std::size_t n, double& sum, double& sumsq);
#endif

} // namespace calr::kernels
