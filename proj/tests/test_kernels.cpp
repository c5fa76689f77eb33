#include <doctest.h>

#include "symsage/simd/kernels.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace symsage::simd;

namespace {

/// Random interior points of the exponential cone: pick y, z > 0, then x below y log(z/y).
std::vector<double> interior_primal(std::mt19937& rng, std::size_t m)
{
    std::uniform_real_distribution<double> pos(1e-3, 50.0);
    std::uniform_real_distribution<double> gap(1e-6, 10.0);
    std::vector<double> s(3 * m);
    for (std::size_t k = 0; k < m; ++k) {
        const double y = pos(rng);
        const double z = pos(rng);
        s[3 * k] = y * std::log(z / y) - gap(rng);
        s[3 * k + 1] = y;
        s[3 * k + 2] = z;
    }
    return s;
}

bool close(double a, double b, double rel)
{
    return std::abs(a - b) <= rel * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace

TEST_CASE("scalar barrier gradient matches finite differences")
{
    std::mt19937 rng(1);
    const auto s = interior_primal(rng, 20);
    const auto& k = scalar_kernels();
    std::vector<double> g(60), h(120);
    k.exp_barrier(s.data(), 20, g.data(), h.data());
    auto F = [](double x, double y, double z) { return -std::log(y * std::log(z / y) - x) - std::log(y) - std::log(z); };
    for (std::size_t c = 0; c < 20; ++c) {
        const double x = s[3 * c], y = s[3 * c + 1], z = s[3 * c + 2];
        const double ex = 1e-6 * std::max(1.0, std::abs(x));
        const double ey = 1e-6 * y;
        const double ez = 1e-6 * z;
        const double fx = (F(x + ex, y, z) - F(x - ex, y, z)) / (2 * ex);
        const double fy = (F(x, y + ey, z) - F(x, y - ey, z)) / (2 * ey);
        const double fz = (F(x, y, z + ez) - F(x, y, z - ez)) / (2 * ez);
        CHECK(g[3 * c] == doctest::Approx(fx).epsilon(1e-4));
        CHECK(g[3 * c + 1] == doctest::Approx(fy).epsilon(1e-4));
        CHECK(g[3 * c + 2] == doctest::Approx(fz).epsilon(1e-4));
        // Logarithmic homogeneity: <grad F(s), s> = -3.
        CHECK(g[3 * c] * x + g[3 * c + 1] * y + g[3 * c + 2] * z == doctest::Approx(-3.0).epsilon(1e-8));
        // Hessian maps s to -grad F(s).
        const double* H = &h[6 * c];
        const double hx = H[0] * x + H[1] * y + H[2] * z;
        const double hy = H[1] * x + H[3] * y + H[4] * z;
        const double hz = H[2] * x + H[4] * y + H[5] * z;
        CHECK(hx == doctest::Approx(-g[3 * c]).epsilon(1e-7));
        CHECK(hy == doctest::Approx(-g[3 * c + 1]).epsilon(1e-7));
        CHECK(hz == doctest::Approx(-g[3 * c + 2]).epsilon(1e-7));
    }
}

TEST_CASE("interior tests")
{
    const auto& k = scalar_kernels();
    const double inside[] = {-1.0, 1.0, 1.0};
    const double boundary[] = {0.0, 1.0, 1.0};
    const double outside[] = {1.0, 1.0, 1.0};
    CHECK(k.exp_primal_outside(inside, 1) == 0);
    CHECK(k.exp_primal_outside(boundary, 1) == 1);
    CHECK(k.exp_primal_outside(outside, 1) == 1);
    const double dual_inside[] = {-1.0, 0.0, 1.0};
    const double dual_outside[] = {1.0, 0.0, 1.0};
    CHECK(k.exp_dual_outside(dual_inside, 1) == 0);
    CHECK(k.exp_dual_outside(dual_outside, 1) == 1);
}

TEST_CASE("AVX2 kernels agree with the scalar reference")
{
    if (!isa_available(Isa::Avx2)) {
        MESSAGE("AVX2 not available on this machine; equivalence test skipped");
        return;
    }
    const auto& ref = scalar_kernels();
    const auto& vec = kernels_for(Isa::Avx2);
    CHECK(vec.isa == Isa::Avx2);
    std::mt19937 rng(42);
    std::normal_distribution<double> normal(0.0, 3.0);
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 9u, 31u, 64u, 1001u}) {
        std::vector<double> a(n), b(n), y1(n), y2(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = normal(rng);
            b[i] = normal(rng);
            y1[i] = y2[i] = normal(rng);
        }
        double scale = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            scale += std::abs(a[i] * b[i]);
        }
        CHECK(std::abs(ref.dot(a.data(), b.data(), n) - vec.dot(a.data(), b.data(), n)) <= 1e-14 * (1.0 + scale));
        ref.axpy(0.7, a.data(), y1.data(), n);
        vec.axpy(0.7, a.data(), y2.data(), n);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(close(y1[i], y2[i], 1e-15));
        }
        CHECK(ref.max_abs(a.data(), n) == vec.max_abs(a.data(), n));
        CHECK(ref.max_step(a.data(), b.data(), n) == vec.max_step(a.data(), b.data(), n));
    }
    for (std::size_t m : {1u, 4u, 5u, 13u, 100u}) {
        auto s = interior_primal(rng, m);
        std::vector<double> g1(3 * m), g2(3 * m), h1(6 * m), h2(6 * m);
        ref.exp_barrier(s.data(), m, g1.data(), h1.data());
        vec.exp_barrier(s.data(), m, g2.data(), h2.data());
        for (std::size_t i = 0; i < 3 * m; ++i) {
            CHECK(close(g1[i], g2[i], 1e-11));
        }
        for (std::size_t i = 0; i < 6 * m; ++i) {
            CHECK(close(h1[i], h2[i], 1e-10));
        }
        // Mixed interior/exterior points: identical counts.
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        std::vector<double> mixed(3 * m);
        for (auto& v : mixed) {
            v = u(rng);
        }
        CHECK(ref.exp_primal_outside(mixed.data(), m) == vec.exp_primal_outside(mixed.data(), m));
        CHECK(ref.exp_dual_outside(mixed.data(), m) == vec.exp_dual_outside(mixed.data(), m));
        CHECK(vec.exp_primal_outside(s.data(), m) == 0);
    }
}

TEST_CASE("dispatch honours availability")
{
    CHECK(isa_available(Isa::Scalar));
    const auto& chosen = kernels();
    CHECK((chosen.isa == Isa::Scalar || isa_available(Isa::Avx2)));
}
