#pragma once

// Data-parallel loops of the interior-point solver.
//
// Every kernel has a portable scalar reference and an AVX2+FMA variant; the
// table is chosen once at first use from CPUID. SYMSAGE_SIMD=scalar forces
// the reference path (SYMSAGE_SIMD=avx2 requests AVX2 when available).
//
// Exponential-cone triples are stored interleaved, (x0, y0, z0, x1, ...),
// for the cone  cl{(x, y, z) : y > 0, y exp(x / y) <= z}.

#include <cstddef>
#include <string_view>

namespace symsage::simd {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

struct KernelTable {
    Isa isa;

    double (*dot)(const double* a, const double* b, std::size_t n);
    /// y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    double (*max_abs)(const double* a, std::size_t n);
    /// Largest t with v + t dv >= 0 componentwise; +inf when dv >= 0.
    double (*max_step)(const double* v, const double* dv, std::size_t n);

    /// Barrier F(x,y,z) = -log(y log(z/y) - x) - log y - log z of m cones:
    /// gradient (3m values) and packed Hessian (6m values: xx xy xz yy yz zz).
    /// Triples must be strictly interior.
    void (*exp_barrier)(const double* s, std::size_t m, double* grad, double* hess);
    /// Number of triples that are not strictly inside the primal cone.
    std::size_t (*exp_primal_outside)(const double* s, std::size_t m);
    /// Number of triples that are not strictly inside the dual cone
    /// cl{(u, v, w) : u < 0, -u exp(v / u) <= e w}.
    std::size_t (*exp_dual_outside)(const double* z, std::size_t m);
};

/// Reference implementation.
const KernelTable& scalar_kernels();
/// AVX2 table, or nullptr when the CPU or the build lacks AVX2+FMA.
const KernelTable* avx2_kernels();

/// Table selected for this process (CPUID plus SYMSAGE_SIMD override).
const KernelTable& kernels();

bool isa_available(Isa isa);
const KernelTable& kernels_for(Isa isa);

}  // namespace symsage::simd
