#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "idenet/kernels.hpp"
#include "idenet/rng.hpp"

using namespace idenet;
namespace k = idenet::kernels;

namespace {

std::vector<double> random_vec(Rng& rng, size_t n, double lo = -3.0, double hi = 3.0) {
    std::vector<double> out(n);
    for (auto& v : out) v = rng.uniform(lo, hi);
    return out;
}

// runs fn under both backends and requires bit-identical output
template <typename Fn>
void check_backends_identical(Fn&& fn) {
    if (!k::avx2_available()) return;  // scalar-only hardware, nothing to compare
    k::force_backend(k::Backend::Scalar);
    const auto scalar_out = fn();
    k::force_backend(k::Backend::Avx2);
    const auto avx2_out = fn();
    k::reset_backend();
    REQUIRE(scalar_out.size() == avx2_out.size());
    for (size_t i = 0; i < scalar_out.size(); ++i) CHECK(scalar_out[i] == avx2_out[i]);
}

}  // namespace

TEST_CASE("gemm matches a hand multiplication") {
    // 2x3 times 3x2
    const std::vector<double> a{1, 2, 3, 4, 5, 6};
    const std::vector<double> b{7, 8, 9, 10, 11, 12};
    std::vector<double> c(4, 0.0);
    k::gemm(a.data(), b.data(), c.data(), 2, 3, 2, false);
    CHECK(c == std::vector<double>{58, 64, 139, 154});

    k::gemm(a.data(), b.data(), c.data(), 2, 3, 2, true);
    CHECK(c == std::vector<double>{116, 128, 278, 308});
}

TEST_CASE("scalar and AVX2 gemm agree bit for bit") {
    Rng rng(1);
    for (const auto& [m, kk, n] :
         {std::tuple<size_t, size_t, size_t>{1, 1, 1}, {3, 5, 7}, {8, 8, 8}, {13, 31, 17},
          {64, 3, 129}}) {
        const auto a = random_vec(rng, m * kk);
        const auto b = random_vec(rng, kk * n);
        check_backends_identical([&] {
            std::vector<double> c(m * n, 0.5);
            k::gemm(a.data(), b.data(), c.data(), m, kk, n, false);
            return c;
        });
    }
}

TEST_CASE("elementwise kernels agree bit for bit across backends") {
    Rng rng(2);
    for (const size_t n : {1, 3, 4, 5, 16, 31, 1000}) {
        const auto a = random_vec(rng, n);
        const auto b = random_vec(rng, n);
        check_backends_identical([&] {
            std::vector<double> out(n);
            k::add(a.data(), b.data(), out.data(), n);
            return out;
        });
        check_backends_identical([&] {
            std::vector<double> out(n);
            k::sub(a.data(), b.data(), out.data(), n);
            return out;
        });
        check_backends_identical([&] {
            std::vector<double> out(n);
            k::mul(a.data(), b.data(), out.data(), n);
            return out;
        });
        check_backends_identical([&] {
            std::vector<double> out = b;
            k::axpy(1.7, a.data(), out.data(), n);
            return out;
        });
        check_backends_identical([&] {
            std::vector<double> out(n);
            k::relu(a.data(), out.data(), n);
            return out;
        });
        check_backends_identical([&] {
            std::vector<double> out = b;
            k::relu_backward(a.data(), b.data(), out.data(), n);
            return out;
        });
        check_backends_identical([&] {
            std::vector<double> out(n);
            k::square(a.data(), out.data(), n);
            return out;
        });
        check_backends_identical([&] {
            std::vector<double> out = a;
            k::clip(out.data(), n, 1.5);
            return out;
        });
    }
}

TEST_CASE("adam kernel agrees bit for bit across backends") {
    Rng rng(3);
    for (const size_t n : {1, 5, 64, 257}) {
        const auto p0 = random_vec(rng, n);
        const auto g = random_vec(rng, n);
        const auto m0 = random_vec(rng, n, 0.0, 0.1);
        const auto v0 = random_vec(rng, n, 0.0, 0.1);
        check_backends_identical([&] {
            auto p = p0;
            auto m = m0;
            auto v = v0;
            k::adam_update(p.data(), g.data(), m.data(), v.data(), n, 0.02, 0.9, 0.999, 1e-8,
                           1e-5, 0.1, 0.001999);
            // concatenate all state so every buffer is compared
            p.insert(p.end(), m.begin(), m.end());
            p.insert(p.end(), v.begin(), v.end());
            return p;
        });
    }
}

TEST_CASE("forced backend selection is honoured") {
    CHECK_NOTHROW(k::force_backend(k::Backend::Scalar));
    CHECK(k::active_backend() == k::Backend::Scalar);
    k::reset_backend();
    if (k::avx2_available()) {
        CHECK(k::active_backend() == k::Backend::Avx2);
    } else {
        CHECK(k::active_backend() == k::Backend::Scalar);
        CHECK_THROWS(k::force_backend(k::Backend::Avx2));
    }
}
