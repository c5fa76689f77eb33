// Compiled with -mavx2 -mfma; only reached through the dispatcher after a CPUID check.

#include "symsage/simd/kernels.hpp"

#include <immintrin.h>

#include <cmath>
#include <limits>

namespace symsage::simd {
namespace {

inline double hsum(__m256d v)
{
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

inline double hmin(__m256d v)
{
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_min_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_min_sd(lo, sh));
}

inline __m256d polevl(__m256d x, const double* c, int degree)
{
    __m256d acc = _mm256_set1_pd(c[0]);
    for (int i = 1; i <= degree; ++i) {
        acc = _mm256_fmadd_pd(acc, x, _mm256_set1_pd(c[i]));
    }
    return acc;
}

// Leading coefficient of the denominator is 1.
inline __m256d p1evl(__m256d x, const double* c, int degree)
{
    __m256d acc = _mm256_add_pd(x, _mm256_set1_pd(c[0]));
    for (int i = 1; i < degree; ++i) {
        acc = _mm256_fmadd_pd(acc, x, _mm256_set1_pd(c[i]));
    }
    return acc;
}

/// Natural log for positive normal inputs (cephes rational approximation).
/// Lanes that are not positive normal numbers produce NaN.
__m256d log_pd(__m256d x)
{
    static const double P[] = {1.01875663804580931796E-4, 4.97494994976747001425E-1,
                               4.70579119878881725854E0,  1.44989225341610930846E1,
                               1.79368678507819816313E1,  7.70838733755885391666E0};
    static const double Q[] = {1.12873587189167450590E1, 4.52279145837532221105E1,
                               8.29875266912776603211E1, 7.11544750618563894466E1,
                               2.31251620126765340583E1};
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d half = _mm256_set1_pd(0.5);

    const __m256i bits = _mm256_castpd_si256(x);
    // Exponent as a double via the 2^52 magic constant.
    const __m256i biased = _mm256_srli_epi64(bits, 52);
    const __m256i magic = _mm256_set1_epi64x(0x4330000000000000LL);
    __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(biased, magic)),
                              _mm256_set1_pd(4503599627370496.0 + 1022.0));
    // Mantissa in [0.5, 1).
    const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
    const __m256i half_exp = _mm256_set1_epi64x(0x3FE0000000000000LL);
    __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), half_exp));

    // If m < sqrt(1/2): e -= 1, m = 2m - 1; else m = m - 1.
    const __m256d small = _mm256_cmp_pd(m, _mm256_set1_pd(0.70710678118654752440), _CMP_LT_OQ);
    e = _mm256_sub_pd(e, _mm256_and_pd(small, one));
    m = _mm256_sub_pd(_mm256_add_pd(m, _mm256_and_pd(small, m)), one);

    const __m256d z = _mm256_mul_pd(m, m);
    __m256d y = _mm256_div_pd(_mm256_mul_pd(_mm256_mul_pd(m, z), polevl(m, P, 5)), p1evl(m, Q, 5));
    y = _mm256_fnmadd_pd(e, _mm256_set1_pd(2.121944400546905827679e-4), y);
    y = _mm256_fnmadd_pd(half, z, y);
    __m256d out = _mm256_add_pd(m, y);
    out = _mm256_fmadd_pd(e, _mm256_set1_pd(0.693359375), out);

    const __m256d valid = _mm256_and_pd(_mm256_cmp_pd(x, _mm256_set1_pd(2.2250738585072014e-308), _CMP_GE_OQ),
                                        _mm256_cmp_pd(x, _mm256_set1_pd(std::numeric_limits<double>::max()),
                                                      _CMP_LE_OQ));
    return _mm256_blendv_pd(_mm256_set1_pd(std::numeric_limits<double>::quiet_NaN()), out, valid);
}

double dot(const double* a, const double* b, std::size_t n)
{
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n)
{
    const __m256d a = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    }
    for (; i < n; ++i) {
        y[i] = std::fma(alpha, x[i], y[i]);
    }
}

double max_abs(const double* a, std::size_t n)
{
    const __m256d sign = _mm256_set1_pd(-0.0);
    __m256d m = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        m = _mm256_max_pd(m, _mm256_andnot_pd(sign, _mm256_loadu_pd(a + i)));
    }
    double out = -hmin(_mm256_sub_pd(_mm256_setzero_pd(), m));
    for (; i < n; ++i) {
        out = std::max(out, std::abs(a[i]));
    }
    return out;
}

double max_step(const double* v, const double* dv, std::size_t n)
{
    const double inf = std::numeric_limits<double>::infinity();
    const __m256d vinf = _mm256_set1_pd(inf);
    const __m256d zero = _mm256_setzero_pd();
    __m256d t = vinf;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_loadu_pd(dv + i);
        const __m256d neg = _mm256_cmp_pd(d, zero, _CMP_LT_OQ);
        const __m256d ratio = _mm256_div_pd(_mm256_sub_pd(zero, _mm256_loadu_pd(v + i)), d);
        t = _mm256_min_pd(t, _mm256_blendv_pd(vinf, ratio, neg));
    }
    double out = hmin(t);
    for (; i < n; ++i) {
        if (dv[i] < 0.0) {
            out = std::min(out, -v[i] / dv[i]);
        }
    }
    return out;
}

struct Triples {
    __m256d x, y, z;
};

inline Triples gather(const double* s, std::size_t k)
{
    const __m256i idx = _mm256_setr_epi64x(0, 3, 6, 9);
    const double* base = s + 3 * k;
    return {_mm256_i64gather_pd(base, idx, 8), _mm256_i64gather_pd(base + 1, idx, 8),
            _mm256_i64gather_pd(base + 2, idx, 8)};
}

void exp_barrier(const double* s, std::size_t m, double* grad, double* hess)
{
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t k = 0;
    alignas(32) double out[9][4];
    for (; k + 4 <= m; k += 4) {
        const auto [x, y, z] = gather(s, k);
        const __m256d l = log_pd(_mm256_div_pd(z, y));
        const __m256d psi = _mm256_fmsub_pd(y, l, x);
        const __m256d ip = _mm256_div_pd(one, psi);
        const __m256d iy = _mm256_div_pd(one, y);
        const __m256d iz = _mm256_div_pd(one, z);
        const __m256d g1 = _mm256_sub_pd(l, one);
        const __m256d g2 = _mm256_mul_pd(y, iz);
        const __m256d ip2 = _mm256_mul_pd(ip, ip);
        _mm256_store_pd(out[0], ip);
        _mm256_store_pd(out[1], _mm256_fnmsub_pd(g1, ip, iy));
        _mm256_store_pd(out[2], _mm256_fnmsub_pd(g2, ip, iz));
        _mm256_store_pd(out[3], ip2);
        _mm256_store_pd(out[4], _mm256_sub_pd(_mm256_setzero_pd(), _mm256_mul_pd(g1, ip2)));
        _mm256_store_pd(out[5], _mm256_sub_pd(_mm256_setzero_pd(), _mm256_mul_pd(g2, ip2)));
        _mm256_store_pd(out[6], _mm256_fmadd_pd(_mm256_mul_pd(g1, g1), ip2,
                                                _mm256_fmadd_pd(ip, iy, _mm256_mul_pd(iy, iy))));
        _mm256_store_pd(out[7], _mm256_fmsub_pd(_mm256_mul_pd(g1, g2), ip2, _mm256_mul_pd(ip, iz)));
        const __m256d iz2 = _mm256_mul_pd(iz, iz);
        _mm256_store_pd(out[8], _mm256_fmadd_pd(_mm256_mul_pd(g2, g2), ip2,
                                                _mm256_fmadd_pd(_mm256_mul_pd(ip, y), iz2, iz2)));
        for (int lane = 0; lane < 4; ++lane) {
            double* g = grad + 3 * (k + lane);
            g[0] = out[0][lane];
            g[1] = out[1][lane];
            g[2] = out[2][lane];
            double* h = hess + 6 * (k + lane);
            for (int e = 0; e < 6; ++e) {
                h[e] = out[3 + e][lane];
            }
        }
    }
    if (k < m) {
        scalar_kernels().exp_barrier(s + 3 * k, m - k, grad + 3 * k, hess + 6 * k);
    }
}

std::size_t exp_primal_outside(const double* s, std::size_t m)
{
    const __m256d zero = _mm256_setzero_pd();
    std::size_t bad = 0;
    std::size_t k = 0;
    for (; k + 4 <= m; k += 4) {
        const auto [x, y, z] = gather(s, k);
        const __m256d pos = _mm256_and_pd(_mm256_cmp_pd(y, zero, _CMP_GT_OQ), _mm256_cmp_pd(z, zero, _CMP_GT_OQ));
        const __m256d psi = _mm256_fmsub_pd(y, log_pd(_mm256_div_pd(z, y)), x);
        const __m256d ok = _mm256_and_pd(pos, _mm256_cmp_pd(psi, zero, _CMP_GT_OQ));
        bad += 4 - static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(ok)));
    }
    return bad + scalar_kernels().exp_primal_outside(s + 3 * k, m - k);
}

std::size_t exp_dual_outside(const double* z, std::size_t m)
{
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t bad = 0;
    std::size_t k = 0;
    for (; k + 4 <= m; k += 4) {
        const auto [u, v, w] = gather(z, k);
        const __m256d sign = _mm256_and_pd(_mm256_cmp_pd(u, zero, _CMP_LT_OQ), _mm256_cmp_pd(w, zero, _CMP_GT_OQ));
        const __m256d lhs = _mm256_add_pd(log_pd(_mm256_div_pd(_mm256_sub_pd(zero, u), w)), _mm256_div_pd(v, u));
        const __m256d ok = _mm256_and_pd(sign, _mm256_cmp_pd(lhs, one, _CMP_LT_OQ));
        bad += 4 - static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(ok)));
    }
    return bad + scalar_kernels().exp_dual_outside(z + 3 * k, m - k);
}

}  // namespace

const KernelTable* avx2_kernels_impl()
{
    static const KernelTable table{Isa::Avx2,  dot,         axpy,          max_abs, max_step,
                                   exp_barrier, exp_primal_outside, exp_dual_outside};
    return &table;
}

}  // namespace symsage::simd
