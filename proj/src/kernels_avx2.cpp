// AVX2 variants of the hot kernels. Built with -mavx2 but without FMA so the
// mul/add rounding sequence matches the scalar reference exactly; every loop
// vectorizes across the same elements the scalar loop touches in order.

#include <immintrin.h>

#include <cmath>
#include <cstddef>

namespace idenet::kernels::avx2 {

void gemm(const double* a, const double* b, double* c, size_t m, size_t k, size_t n) {
    for (size_t i = 0; i < m; ++i) {
        const double* arow = a + i * k;
        double* crow = c + i * n;
        for (size_t l = 0; l < k; ++l) {
            const __m256d av = _mm256_set1_pd(arow[l]);
            const double* brow = b + l * n;
            size_t j = 0;
            for (; j + 4 <= n; j += 4) {
                const __m256d bv = _mm256_loadu_pd(brow + j);
                const __m256d cv = _mm256_loadu_pd(crow + j);
                _mm256_storeu_pd(crow + j, _mm256_add_pd(cv, _mm256_mul_pd(av, bv)));
            }
            const double as = arow[l];
            for (; j < n; ++j) crow[j] += as * brow[j];
        }
    }
}

void add(const double* a, const double* b, double* out, size_t n) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) out[i] = a[i] + b[i];
}

void sub(const double* a, const double* b, double* out, size_t n) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) out[i] = a[i] - b[i];
}

void mul(const double* a, const double* b, double* out, size_t n) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) out[i] = a[i] * b[i];
}

void axpy(double alpha, const double* x, double* y, size_t n) {
    const __m256d av = _mm256_set1_pd(alpha);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d prod = _mm256_mul_pd(av, _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void relu(const double* a, double* out, size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_max_pd(_mm256_loadu_pd(a + i), zero));
    for (; i < n; ++i) out[i] = a[i] > 0.0 ? a[i] : 0.0;
}

void relu_backward(const double* a, const double* grad, double* out, size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(a + i), zero, _CMP_GT_OQ);
        const __m256d masked = _mm256_and_pd(mask, _mm256_loadu_pd(grad + i));
        _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(out + i), masked));
    }
    for (; i < n; ++i)
        if (a[i] > 0.0) out[i] += grad[i];
}

void square(const double* a, double* out, size_t n) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(a + i);
        _mm256_storeu_pd(out + i, _mm256_mul_pd(v, v));
    }
    for (; i < n; ++i) out[i] = a[i] * a[i];
}

void clip(double* values, size_t n, double limit) {
    const __m256d hi = _mm256_set1_pd(limit);
    const __m256d lo = _mm256_set1_pd(-limit);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(values + i);
        v = _mm256_min_pd(v, hi);
        v = _mm256_max_pd(v, lo);
        _mm256_storeu_pd(values + i, v);
    }
    for (; i < n; ++i) {
        if (values[i] > limit) values[i] = limit;
        else if (values[i] < -limit) values[i] = -limit;
    }
}

void adam_update(double* param, const double* grad, double* m, double* v, size_t n, double lr,
                 double beta1, double beta2, double eps, double weight_decay, double bias1,
                 double bias2) {
    const __m256d b1 = _mm256_set1_pd(beta1);
    const __m256d b2 = _mm256_set1_pd(beta2);
    const __m256d one_b1 = _mm256_set1_pd(1.0 - beta1);
    const __m256d one_b2 = _mm256_set1_pd(1.0 - beta2);
    const __m256d inv_bias1 = _mm256_set1_pd(bias1);
    const __m256d inv_bias2 = _mm256_set1_pd(bias2);
    const __m256d lr_v = _mm256_set1_pd(lr);
    const __m256d eps_v = _mm256_set1_pd(eps);
    const __m256d wd = _mm256_set1_pd(weight_decay);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d g = _mm256_loadu_pd(grad + i);
        __m256d mv = _mm256_loadu_pd(m + i);
        __m256d vv = _mm256_loadu_pd(v + i);
        mv = _mm256_add_pd(_mm256_mul_pd(b1, mv), _mm256_mul_pd(one_b1, g));
        vv = _mm256_add_pd(_mm256_mul_pd(b2, vv), _mm256_mul_pd(one_b2, _mm256_mul_pd(g, g)));
        _mm256_storeu_pd(m + i, mv);
        _mm256_storeu_pd(v + i, vv);
        const __m256d mhat = _mm256_div_pd(mv, inv_bias1);
        const __m256d vhat = _mm256_div_pd(vv, inv_bias2);
        const __m256d denom = _mm256_add_pd(_mm256_sqrt_pd(vhat), eps_v);
        const __m256d step = _mm256_add_pd(_mm256_div_pd(mhat, denom),
                                           _mm256_mul_pd(wd, _mm256_loadu_pd(param + i)));
        _mm256_storeu_pd(param + i,
                         _mm256_sub_pd(_mm256_loadu_pd(param + i), _mm256_mul_pd(lr_v, step)));
    }
    for (; i < n; ++i) {
        m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
        v[i] = beta2 * v[i] + (1.0 - beta2) * (grad[i] * grad[i]);
        const double mhat = m[i] / bias1;
        const double vhat = v[i] / bias2;
        param[i] -= lr * (mhat / (std::sqrt(vhat) + eps) + weight_decay * param[i]);
    }
}

}  // namespace idenet::kernels::avx2
