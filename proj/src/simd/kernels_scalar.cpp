#include "symsage/simd/kernels.hpp"

#include <cmath>
#include <limits>

namespace symsage::simd {
namespace {

double dot(const double* a, const double* b, std::size_t n)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i) {
        y[i] += alpha * x[i];
    }
}

double max_abs(const double* a, std::size_t n)
{
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        m = std::max(m, std::abs(a[i]));
    }
    return m;
}

double max_step(const double* v, const double* dv, std::size_t n)
{
    double t = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        if (dv[i] < 0.0) {
            t = std::min(t, -v[i] / dv[i]);
        }
    }
    return t;
}

void exp_barrier(const double* s, std::size_t m, double* grad, double* hess)
{
    for (std::size_t k = 0; k < m; ++k) {
        const double x = s[3 * k];
        const double y = s[3 * k + 1];
        const double z = s[3 * k + 2];
        const double l = std::log(z / y);
        const double psi = y * l - x;
        const double ip = 1.0 / psi;
        const double iy = 1.0 / y;
        const double iz = 1.0 / z;
        // g = grad psi = (-1, l - 1, y / z)
        const double g1 = l - 1.0;
        const double g2 = y * iz;
        grad[3 * k] = ip;
        grad[3 * k + 1] = -g1 * ip - iy;
        grad[3 * k + 2] = -g2 * ip - iz;
        const double ip2 = ip * ip;
        double* h = hess + 6 * k;
        h[0] = ip2;
        h[1] = -g1 * ip2;
        h[2] = -g2 * ip2;
        h[3] = g1 * g1 * ip2 + ip * iy + iy * iy;
        h[4] = g1 * g2 * ip2 - ip * iz;
        h[5] = g2 * g2 * ip2 + ip * y * iz * iz + iz * iz;
    }
}

std::size_t exp_primal_outside(const double* s, std::size_t m)
{
    std::size_t bad = 0;
    for (std::size_t k = 0; k < m; ++k) {
        const double x = s[3 * k];
        const double y = s[3 * k + 1];
        const double z = s[3 * k + 2];
        const bool inside = y > 0.0 && z > 0.0 && y * std::log(z / y) - x > 0.0;
        bad += inside ? 0 : 1;
    }
    return bad;
}

std::size_t exp_dual_outside(const double* z, std::size_t m)
{
    std::size_t bad = 0;
    for (std::size_t k = 0; k < m; ++k) {
        const double u = z[3 * k];
        const double v = z[3 * k + 1];
        const double w = z[3 * k + 2];
        const bool inside = u < 0.0 && w > 0.0 && std::log(-u / w) + v / u < 1.0;
        bad += inside ? 0 : 1;
    }
    return bad;
}

}  // namespace

const KernelTable& scalar_kernels()
{
    static const KernelTable table{Isa::Scalar,        dot,         axpy,          max_abs, max_step,
                                   exp_barrier,        exp_primal_outside, exp_dual_outside};
    return table;
}

}  // namespace symsage::simd
