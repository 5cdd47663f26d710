#pragma once

#include <cstddef>

namespace idenet::kernels {

// Scalar reference kernels plus AVX2 variants picked at runtime. The two
// paths are bit-identical: both accumulate in k-order with one rounding per
// multiply and add (the AVX2 objects are built without FMA contraction), so
// equivalence tests compare exactly.
enum class Backend { Scalar, Avx2 };

bool avx2_available();
Backend active_backend();
// test hook; selecting Avx2 on hardware without it throws
void force_backend(Backend backend);
void reset_backend();

// row-major C (m x n) = A (m x k) * B (k x n), accumulating when asked
void gemm(const double* a, const double* b, double* c, size_t m, size_t k, size_t n,
          bool accumulate);

void add(const double* a, const double* b, double* out, size_t n);
void sub(const double* a, const double* b, double* out, size_t n);
void mul(const double* a, const double* b, double* out, size_t n);
// y += alpha * x
void axpy(double alpha, const double* x, double* y, size_t n);
void relu(const double* a, double* out, size_t n);
// out += grad where a > 0
void relu_backward(const double* a, const double* grad, double* out, size_t n);
void square(const double* a, double* out, size_t n);
// elementwise clamp to [-limit, limit]
void clip(double* values, size_t n, double limit);

// Adam with bias correction and decoupled weight decay; m/v are the moment
// buffers, bias1/bias2 the 1-beta^t corrections for the current step
void adam_update(double* param, const double* grad, double* m, double* v, size_t n, double lr,
                 double beta1, double beta2, double eps, double weight_decay, double bias1,
                 double bias2);

}  // namespace idenet::kernels
