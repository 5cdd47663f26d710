#include "idenet/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace idenet::kernels {

namespace avx2 {
void gemm(const double* a, const double* b, double* c, size_t m, size_t k, size_t n);
void add(const double* a, const double* b, double* out, size_t n);
void sub(const double* a, const double* b, double* out, size_t n);
void mul(const double* a, const double* b, double* out, size_t n);
void axpy(double alpha, const double* x, double* y, size_t n);
void relu(const double* a, double* out, size_t n);
void relu_backward(const double* a, const double* grad, double* out, size_t n);
void square(const double* a, double* out, size_t n);
void clip(double* values, size_t n, double limit);
void adam_update(double* param, const double* grad, double* m, double* v, size_t n, double lr,
                 double beta1, double beta2, double eps, double weight_decay, double bias1,
                 double bias2);
}  // namespace avx2

bool avx2_available() {
#if defined(IDENET_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

namespace {

Backend detect() {
    if (std::getenv("IDENET_FORCE_SCALAR")) return Backend::Scalar;
    return avx2_available() ? Backend::Avx2 : Backend::Scalar;
}

Backend g_backend = detect();

}  // namespace

Backend active_backend() { return g_backend; }

void force_backend(Backend backend) {
    if (backend == Backend::Avx2 && !avx2_available())
        throw std::runtime_error("AVX2 backend requested on hardware without AVX2");
    g_backend = backend;
}

void reset_backend() { g_backend = detect(); }

namespace scalar {

void gemm(const double* a, const double* b, double* c, size_t m, size_t k, size_t n) {
    for (size_t i = 0; i < m; ++i) {
        const double* arow = a + i * k;
        double* crow = c + i * n;
        for (size_t l = 0; l < k; ++l) {
            const double av = arow[l];
            const double* brow = b + l * n;
            for (size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
    }
}

void add(const double* a, const double* b, double* out, size_t n) {
    for (size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

void sub(const double* a, const double* b, double* out, size_t n) {
    for (size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

void mul(const double* a, const double* b, double* out, size_t n) {
    for (size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void axpy(double alpha, const double* x, double* y, size_t n) {
    for (size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void relu(const double* a, double* out, size_t n) {
    for (size_t i = 0; i < n; ++i) out[i] = a[i] > 0.0 ? a[i] : 0.0;
}

void relu_backward(const double* a, const double* grad, double* out, size_t n) {
    for (size_t i = 0; i < n; ++i)
        if (a[i] > 0.0) out[i] += grad[i];
}

void square(const double* a, double* out, size_t n) {
    for (size_t i = 0; i < n; ++i) out[i] = a[i] * a[i];
}

void clip(double* values, size_t n, double limit) {
    for (size_t i = 0; i < n; ++i) {
        if (values[i] > limit) values[i] = limit;
        else if (values[i] < -limit) values[i] = -limit;
    }
}

void adam_update(double* param, const double* grad, double* m, double* v, size_t n, double lr,
                 double beta1, double beta2, double eps, double weight_decay, double bias1,
                 double bias2) {
    for (size_t i = 0; i < n; ++i) {
        m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
        v[i] = beta2 * v[i] + (1.0 - beta2) * (grad[i] * grad[i]);
        const double mhat = m[i] / bias1;
        const double vhat = v[i] / bias2;
        param[i] -= lr * (mhat / (std::sqrt(vhat) + eps) + weight_decay * param[i]);
    }
}

}  // namespace scalar

void gemm(const double* a, const double* b, double* c, size_t m, size_t k, size_t n,
          bool accumulate) {
    if (!accumulate) std::memset(c, 0, m * n * sizeof(double));
#ifdef IDENET_HAVE_AVX2
    if (g_backend == Backend::Avx2) {
        avx2::gemm(a, b, c, m, k, n);
        return;
    }
#endif
    scalar::gemm(a, b, c, m, k, n);
}

#ifdef IDENET_HAVE_AVX2
#define IDENET_DISPATCH(fn, ...)                 \
    if (g_backend == Backend::Avx2) {            \
        avx2::fn(__VA_ARGS__);                   \
        return;                                  \
    }                                            \
    scalar::fn(__VA_ARGS__)
#else
#define IDENET_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

void add(const double* a, const double* b, double* out, size_t n) {
    IDENET_DISPATCH(add, a, b, out, n);
}
void sub(const double* a, const double* b, double* out, size_t n) {
    IDENET_DISPATCH(sub, a, b, out, n);
}
void mul(const double* a, const double* b, double* out, size_t n) {
    IDENET_DISPATCH(mul, a, b, out, n);
}
void axpy(double alpha, const double* x, double* y, size_t n) {
    IDENET_DISPATCH(axpy, alpha, x, y, n);
}
void relu(const double* a, double* out, size_t n) { IDENET_DISPATCH(relu, a, out, n); }
void relu_backward(const double* a, const double* grad, double* out, size_t n) {
    IDENET_DISPATCH(relu_backward, a, grad, out, n);
}
void square(const double* a, double* out, size_t n) { IDENET_DISPATCH(square, a, out, n); }
void clip(double* values, size_t n, double limit) { IDENET_DISPATCH(clip, values, n, limit); }
void adam_update(double* param, const double* grad, double* m, double* v, size_t n, double lr,
                 double beta1, double beta2, double eps, double weight_decay, double bias1,
                 double bias2) {
    IDENET_DISPATCH(adam_update, param, grad, m, v, n, lr, beta1, beta2, eps, weight_decay, bias1,
                    bias2);
}

#undef IDENET_DISPATCH

}  // namespace idenet::kernels
