#include "symsage/conic.hpp"
#include "symsage/simd/kernels.hpp"

#include "ldl.hpp"

#include <Eigen/Dense>
#include <Eigen/OrderingMethods>
#include <Eigen/SparseCore>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <cstdlib>

namespace symsage {
namespace {

using SpMat = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using Vec = Eigen::VectorXd;

// Point with s = z = -grad F(s) for the exponential-cone barrier.
constexpr double kExpCenter[3] = {-0.82783839906567858, 0.80510200158479539, 1.290927709856958};

constexpr double kStaticReg = 1e-9;
constexpr double kPivotFloor = 1e-13;
constexpr double kPivotRegularization = 2e-7;
constexpr double kStepFactor = 0.99;
// Wide neighborhood: every cone keeps at least this share of the average
// complementarity.
constexpr double kNeighborhood = 0.01;
constexpr int kRuizPasses = 25;
constexpr int kRefinementSteps = 8;

double inf_norm(const Vec& v)
{
    return v.size() ? simd::kernels().max_abs(v.data(), static_cast<std::size_t>(v.size())) : 0.0;
}

double dot(const Vec& a, const Vec& b)
{
    return a.size() ? simd::kernels().dot(a.data(), b.data(), static_cast<std::size_t>(a.size())) : 0.0;
}

/// Presolved and equilibrated copy of the program.
struct Problem {
    std::size_t n = 0;
    std::size_t p = 0;
    std::size_t l = 0;
    std::size_t e = 0;
    SpMat A;
    SpMat G;
    Vec b;
    Vec h;
    Vec c;
    // Original = scaled with x = F xs, y = D ys, z = E zs, s = s_s / E.
    Vec D;
    Vec E;
    Vec F;
    std::vector<std::size_t> kept_eq;   // original equality row of each kept row
    std::vector<std::size_t> kept_var;  // original variable of each kept column
    std::vector<std::size_t> kept_row;  // original cone row of each kept row
    std::size_t m() const { return l + 3 * e; }
    double barrier_degree() const { return static_cast<double>(l + 3 * e); }
};

SpMat build(std::size_t rows, std::size_t cols, const std::vector<Eigen::Triplet<double>>& t)
{
    SpMat m(static_cast<int>(rows), static_cast<int>(cols));
    m.setFromTriplets(t.begin(), t.end());
    m.prune(0.0);
    m.makeCompressed();
    return m;
}

struct PresolveOutcome {
    std::optional<SolveStatus> decided;
    std::string message;
};

PresolveOutcome presolve(const CanonicalProgram& prog, Problem& pb)
{
    PresolveOutcome out;
    // Summed entries per row / column, ignoring exact zeros.
    std::vector<Eigen::Triplet<double>> at;
    std::vector<Eigen::Triplet<double>> gt;
    for (const auto& t : prog.A) {
        at.emplace_back(static_cast<int>(t.row), static_cast<int>(t.col), t.value);
    }
    for (const auto& t : prog.G) {
        gt.emplace_back(static_cast<int>(t.row), static_cast<int>(t.col), t.value);
    }
    SpMat A = build(prog.num_eq, prog.num_vars, at);
    SpMat G = build(prog.num_cone_rows(), prog.num_vars, gt);

    std::vector<int> row_nnz_a(prog.num_eq, 0);
    std::vector<int> row_nnz_g(prog.num_cone_rows(), 0);
    std::vector<int> col_nnz(prog.num_vars, 0);
    for (int k = 0; k < A.outerSize(); ++k) {
        for (SpMat::InnerIterator it(A, k); it; ++it) {
            ++row_nnz_a[it.row()];
            ++col_nnz[it.col()];
        }
    }
    for (int k = 0; k < G.outerSize(); ++k) {
        for (SpMat::InnerIterator it(G, k); it; ++it) {
            ++row_nnz_g[it.row()];
            ++col_nnz[it.col()];
        }
    }

    std::vector<int> eq_map(prog.num_eq, -1);
    for (std::size_t i = 0; i < prog.num_eq; ++i) {
        if (row_nnz_a[i] == 0) {
            if (prog.b[i] != 0.0) {
                out.decided = SolveStatus::Infeasible;
                out.message = "empty equality row with nonzero right-hand side";
                return out;
            }
            continue;
        }
        eq_map[i] = static_cast<int>(pb.kept_eq.size());
        pb.kept_eq.push_back(i);
    }
    std::vector<int> lin_map(prog.num_cone_rows(), -1);
    std::size_t kept_linear = 0;
    for (std::size_t i = 0; i < prog.num_linear; ++i) {
        if (row_nnz_g[i] == 0) {
            if (prog.h[i] < 0.0) {
                out.decided = SolveStatus::Infeasible;
                out.message = "empty inequality row with negative right-hand side";
                return out;
            }
            continue;
        }
        lin_map[i] = static_cast<int>(kept_linear++);
    }
    for (std::size_t i = prog.num_linear; i < prog.num_cone_rows(); ++i) {
        lin_map[i] = static_cast<int>(kept_linear + (i - prog.num_linear));
    }
    for (std::size_t i = 0; i < prog.num_cone_rows(); ++i) {
        if (lin_map[i] >= 0) {
            pb.kept_row.push_back(i);
        }
    }
    std::vector<int> var_map(prog.num_vars, -1);
    for (std::size_t j = 0; j < prog.num_vars; ++j) {
        if (col_nnz[j] == 0) {
            if (prog.c[j] != 0.0) {
                out.decided = SolveStatus::Unbounded;
                out.message = "free variable with nonzero cost appears in no constraint";
                return out;
            }
            continue;
        }
        var_map[j] = static_cast<int>(pb.kept_var.size());
        pb.kept_var.push_back(j);
    }

    pb.n = pb.kept_var.size();
    pb.p = pb.kept_eq.size();
    pb.l = kept_linear;
    pb.e = prog.num_exp;
    std::vector<Eigen::Triplet<double>> a2;
    std::vector<Eigen::Triplet<double>> g2;
    for (int k = 0; k < A.outerSize(); ++k) {
        for (SpMat::InnerIterator it(A, k); it; ++it) {
            a2.emplace_back(eq_map[it.row()], var_map[it.col()], it.value());
        }
    }
    for (int k = 0; k < G.outerSize(); ++k) {
        for (SpMat::InnerIterator it(G, k); it; ++it) {
            g2.emplace_back(lin_map[it.row()], var_map[it.col()], it.value());
        }
    }
    pb.A = build(pb.p, pb.n, a2);
    pb.G = build(pb.m(), pb.n, g2);
    pb.b.resize(static_cast<int>(pb.p));
    for (std::size_t i = 0; i < pb.p; ++i) {
        pb.b[static_cast<int>(i)] = prog.b[pb.kept_eq[i]];
    }
    pb.h.resize(static_cast<int>(pb.m()));
    for (std::size_t i = 0; i < prog.num_cone_rows(); ++i) {
        if (lin_map[i] >= 0) {
            pb.h[lin_map[i]] = prog.h[i];
        }
    }
    pb.c.resize(static_cast<int>(pb.n));
    for (std::size_t j = 0; j < pb.n; ++j) {
        pb.c[static_cast<int>(j)] = prog.c[pb.kept_var[j]];
    }
    return out;
}

/// Ruiz equilibration of [A; G]; exponential-cone triples share one row factor.
void equilibrate(Problem& pb)
{
    pb.D = Vec::Ones(static_cast<int>(pb.p));
    pb.E = Vec::Ones(static_cast<int>(pb.m()));
    pb.F = Vec::Ones(static_cast<int>(pb.n));
    for (int pass = 0; pass < kRuizPasses; ++pass) {
        Vec col = Vec::Zero(static_cast<int>(pb.n));
        Vec row_a = Vec::Zero(static_cast<int>(pb.p));
        Vec row_g = Vec::Zero(static_cast<int>(pb.m()));
        for (int k = 0; k < pb.A.outerSize(); ++k) {
            for (SpMat::InnerIterator it(pb.A, k); it; ++it) {
                const double a = std::abs(it.value());
                col[it.col()] = std::max(col[it.col()], a);
                row_a[it.row()] = std::max(row_a[it.row()], a);
            }
        }
        for (int k = 0; k < pb.G.outerSize(); ++k) {
            for (SpMat::InnerIterator it(pb.G, k); it; ++it) {
                const double a = std::abs(it.value());
                col[it.col()] = std::max(col[it.col()], a);
                row_g[it.row()] = std::max(row_g[it.row()], a);
            }
        }
        for (std::size_t k = 0; k < pb.e; ++k) {
            const int r0 = static_cast<int>(pb.l + 3 * k);
            const double mx = std::max({row_g[r0], row_g[r0 + 1], row_g[r0 + 2]});
            row_g[r0] = row_g[r0 + 1] = row_g[r0 + 2] = mx;
        }
        auto factor = [](double norm) { return norm > 0.0 ? 1.0 / std::sqrt(norm) : 1.0; };
        double spread = 0.0;
        Vec fc(col.size());
        Vec fa(row_a.size());
        Vec fg(row_g.size());
        for (int j = 0; j < col.size(); ++j) {
            fc[j] = factor(col[j]);
            spread = std::max(spread, std::abs(1.0 - col[j]));
        }
        for (int i = 0; i < row_a.size(); ++i) {
            fa[i] = factor(row_a[i]);
            spread = std::max(spread, std::abs(1.0 - row_a[i]));
        }
        for (int i = 0; i < row_g.size(); ++i) {
            fg[i] = factor(row_g[i]);
            spread = std::max(spread, std::abs(1.0 - row_g[i]));
        }
        if (spread < 1e-3) {
            break;
        }
        for (int k = 0; k < pb.A.outerSize(); ++k) {
            for (SpMat::InnerIterator it(pb.A, k); it; ++it) {
                it.valueRef() *= fa[it.row()] * fc[it.col()];
            }
        }
        for (int k = 0; k < pb.G.outerSize(); ++k) {
            for (SpMat::InnerIterator it(pb.G, k); it; ++it) {
                it.valueRef() *= fg[it.row()] * fc[it.col()];
            }
        }
        pb.D = pb.D.cwiseProduct(fa);
        pb.E = pb.E.cwiseProduct(fg);
        pb.F = pb.F.cwiseProduct(fc);
    }
    pb.b = pb.b.cwiseProduct(pb.D);
    pb.h = pb.h.cwiseProduct(pb.E);
    pb.c = pb.c.cwiseProduct(pb.F);
}

/// Inverse Hessian of the exponential-cone barrier at an interior point.
/// Eliminating the first coordinate leaves the Schur complement
/// diag(1/y^2, 1/z^2) + v v' / psi, whose inverse is explicit, so nothing
/// cancels as psi = y log(z/y) - x goes to zero.
Eigen::Matrix3d exp_inverse_hessian(const double* u)
{
    const double x = u[0];
    const double y = u[1];
    const double z = u[2];
    const double ell = std::log(z / y);
    const double psi = y * ell - x;
    const double d = psi + 2.0 * y;
    Eigen::Matrix2d S;
    S << y * y * (psi + y) / d, y * y * z / d, y * y * z / d, z * z * (psi + y) / d;
    const Eigen::Vector2d g(ell - 1.0, y / z);
    const Eigen::Vector2d sg = S * g;
    Eigen::Matrix3d out;
    out(0, 0) = psi * psi + g.dot(sg);
    out(0, 1) = out(1, 0) = sg[0];
    out(0, 2) = out(2, 0) = sg[1];
    out.block<2, 2>(1, 1) = S;
    return out;
}

/// Third derivative of the barrier contracted with u and v.
Eigen::Vector3d exp_third_derivative(const double* s, const Eigen::Vector3d& u, const Eigen::Vector3d& v)
{
    const double y = s[1];
    const double z = s[2];
    const double psi = y * std::log(z / y) - s[0];
    const Eigen::Vector3d g(-1.0, std::log(z / y) - 1.0, y / z);
    Eigen::Matrix3d h2 = Eigen::Matrix3d::Zero();  // hessian of psi
    h2(1, 1) = -1.0 / y;
    h2(1, 2) = h2(2, 1) = 1.0 / z;
    h2(2, 2) = -y / (z * z);
    const double gu = g.dot(u);
    const double gv = g.dot(v);
    const double uhv = u.dot(h2 * v);
    Eigen::Vector3d d3(0.0, u[1] * v[1] / (y * y) - u[2] * v[2] / (z * z),
                       -(u[1] * v[2] + u[2] * v[1]) / (z * z) + 2.0 * y * u[2] * v[2] / (z * z * z));
    Eigen::Vector3d out = (h2 * u * gv + h2 * v * gu) / (psi * psi) - 2.0 * gu * gv * g / (psi * psi * psi) -
                          d3 / psi + uhv * g / (psi * psi);
    out[1] -= 2.0 * u[1] * v[1] / (y * y * y);
    out[2] -= 2.0 * u[2] * v[2] / (z * z * z);
    return out;
}

struct Iterate {
    Vec x, y, z, s;
    double tau = 1.0;
    double kappa = 1.0;
};

struct Direction {
    Vec x, y, z, s;
    double tau = 0.0;
    double kappa = 0.0;
};

class InteriorPoint {
public:
    InteriorPoint(Problem& pb, const SolverConfig& cfg, const CanonicalProgram& original)
        : pb_(pb), cfg_(cfg), orig_(original), k_(simd::kernels())
    {
        nv_ = static_cast<int>(pb_.n);
        np_ = static_cast<int>(pb_.p);
        nm_ = static_cast<int>(pb_.m());
        At_ = pb_.A.transpose();
        Gt_ = pb_.G.transpose();
        grad_.resize(3 * pb_.e);
        hess_.resize(6 * pb_.e);
        W_.resize(9 * pb_.e);
        wz_.assign(3 * pb_.e, 0.0);
        wzt_.assign(3 * pb_.e, 0.0);
        Wlin_.resize(pb_.l);
        assemble_kkt();
    }

    SolveResult run();

private:
    void assemble_kkt();
    bool factor(const Iterate& it);
    void solve_kkt(const Vec& rx, const Vec& ry, const Vec& rz, Vec& dx, Vec& dy, Vec& dz);
    void apply_w(const Vec& v, Vec& out) const;
    double max_step(const Iterate& it, const Direction& d) const;
    bool interior(const Iterate& it, const Direction& d, double alpha) const;
    bool centered(const Iterate& it, const Direction& d, double alpha);
    void unscale(const Iterate& it, std::vector<double>& x, std::vector<double>& y, std::vector<double>& z,
                 double divisor) const;
    double mu(const Iterate& it) const
    {
        return (dot(it.s, it.z) + it.tau * it.kappa) / (pb_.barrier_degree() + 1.0);
    }

    Problem& pb_;
    const SolverConfig& cfg_;
    const CanonicalProgram& orig_;
    const simd::KernelTable& k_;
    int nv_ = 0;
    int np_ = 0;
    int nm_ = 0;
    SpMat At_;
    SpMat Gt_;
    SpMat K_;
    detail::QuasiDefiniteLDL ldl_;
    std::vector<double*> wlin_slots_;
    std::vector<double*> wexp_slots_;  // 9 per cone, row-major
    std::vector<double> grad_;
    std::vector<double> hess_;
    std::vector<double> W_;     // inverse scaling matrix per cone, row-major 3x3
    std::vector<double> wz_;    // W z per cone
    std::vector<double> wzt_;   // W (-grad F(s)) per cone
    std::vector<double> Wlin_;  // s / z per linear row
    double last_refine_error_ = 0.0;
};

void InteriorPoint::assemble_kkt()
{
    const int N = nv_ + np_ + nm_;
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(static_cast<std::size_t>(2 * (pb_.A.nonZeros() + pb_.G.nonZeros()) + N + 9 * pb_.e));
    const auto both = [&](int r, int c, double v) {
        t.emplace_back(r, c, v);
        if (r != c) {
            t.emplace_back(c, r, v);
        }
    };
    for (int j = 0; j < nv_; ++j) {
        t.emplace_back(j, j, kStaticReg);
    }
    for (int k = 0; k < pb_.A.outerSize(); ++k) {
        for (SpMat::InnerIterator it(pb_.A, k); it; ++it) {
            both(static_cast<int>(it.col()), nv_ + static_cast<int>(it.row()), it.value());
        }
    }
    for (int i = 0; i < np_; ++i) {
        t.emplace_back(nv_ + i, nv_ + i, -kStaticReg);
    }
    for (int k = 0; k < pb_.G.outerSize(); ++k) {
        for (SpMat::InnerIterator it(pb_.G, k); it; ++it) {
            both(static_cast<int>(it.col()), nv_ + np_ + static_cast<int>(it.row()), it.value());
        }
    }
    const int base = nv_ + np_;
    for (std::size_t i = 0; i < pb_.l; ++i) {
        t.emplace_back(base + static_cast<int>(i), base + static_cast<int>(i), -1.0);
    }
    for (std::size_t k = 0; k < pb_.e; ++k) {
        const int r0 = base + static_cast<int>(pb_.l + 3 * k);
        for (int a = 0; a < 3; ++a) {
            for (int b = a; b < 3; ++b) {
                both(r0 + a, r0 + b, a == b ? -1.0 : 0.5);
            }
        }
    }
    K_.resize(N, N);
    K_.setFromTriplets(t.begin(), t.end());
    K_.makeCompressed();
    for (std::size_t i = 0; i < pb_.l; ++i) {
        wlin_slots_.push_back(&K_.coeffRef(base + static_cast<int>(i), base + static_cast<int>(i)));
    }
    for (std::size_t k = 0; k < pb_.e; ++k) {
        const int r0 = base + static_cast<int>(pb_.l + 3 * k);
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                wexp_slots_.push_back(&K_.coeffRef(r0 + a, r0 + b));
            }
        }
    }
    std::vector<int> signs(N, -1);
    std::fill(signs.begin(), signs.begin() + nv_, 1);
    ldl_.analyze(K_, std::move(signs));
}

/// v' hess F(u) v. The normal part enters squared, so nothing cancels.
double exp_hessian_form(const double* u, const Eigen::Vector3d& v)
{
    const double y = u[1];
    const double z = u[2];
    const double ell = std::log(z / y);
    const double psi = y * ell - u[0];
    const double gv = -v[0] + (ell - 1.0) * v[1] + (y / z) * v[2];
    // hess psi is [0 0 0; 0 -1/y 1/z; 0 1/z -y/z^2] = -(z v1 - y v2)^2 / (y z^2).
    const double cross = z * v[1] - y * v[2];
    return gv * gv / (psi * psi) + cross * cross / (y * z * z * psi) + v[1] * v[1] / (y * y) + v[2] * v[2] / (z * z);
}

/// Point u in the interior of K_exp with -grad F(u) = z. With a = -z0 and
/// t = 1/u1 the gradient equations reduce to t + a log(a + t) = c, which is
/// increasing in t, so a safeguarded Newton iteration on q = a + t finds the
/// root. Fails when z is not in the interior of the dual cone.
bool conjugate_point(const Eigen::Vector3d& z, Eigen::Vector3d& u)
{
    const double a = -z[0];
    const double w = z[2];
    if (!(a > 0.0) || !(w > 0.0)) {
        return false;
    }
    // g(q) = q + a log q - (v + a log w + 2a), root with q > a.
    const double rhs = z[1] + a * std::log(w) + 2.0 * a;
    const auto g = [&](double q) { return q + a * std::log(q) - rhs; };
    double lo = a;
    if (!(g(lo) < 0.0)) {
        return false;
    }
    double hi = std::max(2.0 * a, 1.0);
    while (g(hi) <= 0.0) {
        hi *= 2.0;
        if (!std::isfinite(hi)) {
            return false;
        }
    }
    double q = hi;
    for (int iter = 0; iter < 200; ++iter) {
        const double gq = g(q);
        if (gq > 0.0) {
            hi = q;
        } else {
            lo = q;
        }
        double next = q - gq / (1.0 + a / q);
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (std::abs(next - q) <= 1e-15 * q) {
            q = next;
            break;
        }
        q = next;
    }
    const double t = q - a;
    if (!(t > 0.0)) {
        return false;
    }
    const double y = 1.0 / t;
    const double zz = (1.0 + a * y) / w;
    u[0] = y * std::log(zz / y) - 1.0 / a;
    u[1] = y;
    u[2] = zz;
    return u.allFinite();
}

bool InteriorPoint::factor(const Iterate& it)
{
    for (std::size_t i = 0; i < pb_.l; ++i) {
        Wlin_[i] = it.s[static_cast<int>(i)] / it.z[static_cast<int>(i)];
        *wlin_slots_[i] = -Wlin_[i] - kStaticReg;
    }
    if (pb_.e > 0) {
        k_.exp_barrier(it.s.data() + pb_.l, pb_.e, grad_.data(), hess_.data());
        for (std::size_t k = 0; k < pb_.e; ++k) {
            const int r0 = static_cast<int>(pb_.l + 3 * k);
            const Eigen::Vector3d s = it.s.segment<3>(r0);
            const Eigen::Vector3d z = it.z.segment<3>(r0);
            const double mk = s.dot(z) / 3.0;
            const Eigen::Vector3d zt(-grad_[3 * k], -grad_[3 * k + 1], -grad_[3 * k + 2]);
            Eigen::Matrix3d W;
            Eigen::Vector3d wz;
            Eigen::Vector3d wzt;
            Eigen::Vector3d xt;
            if (conjugate_point(z, xt)) {
                // Dual scaling mk hess F*(z) = mk hess F(xt)^{-1}; xt sits well
                // inside the cone even when s is close to its boundary.
                const Eigen::Matrix3d Wd = mk * exp_inverse_hessian(xt.data());
                W = Wd;
                wz = mk * xt;
                wzt = Wd * zt;
                // Rank-3 form with W z = s and W zt = xt, built only from
                // quantities that carry no cancellation.
                const Eigen::Vector3d ds = s - mk * xt;
                const Eigen::Vector3d dz = z - mk * zt;
                const double sd = ds.dot(dz);
                Eigen::Vector3d axis = z.cross(zt);
                const double an = axis.norm();
                // Off the central path mk <xt, zt> / 3 > 1; too close to it
                // the rank-3 terms are rounding noise.
                const double off = mk * xt.dot(zt) / 3.0 - 1.0;
                if (off > 1e-7 && sd > 0.0 && an > 0.0) {
                    axis /= an;
                    // BFGS choice: curvature of (mk hess F(s))^{-1} across the
                    // two secant directions.
                    const double t = 1.0 / (mk * exp_hessian_form(s.data(), axis));
                    const Eigen::Matrix3d full =
                        s * s.transpose() / (3.0 * mk) + ds * ds.transpose() / sd + t * axis * axis.transpose();
                    if (full.allFinite() && Eigen::LLT<Eigen::Matrix3d>(full).info() == Eigen::Success) {
                        W = full;
                        wz = s;
                        wzt = xt;
                    }
                }
            } else {
                W = exp_inverse_hessian(s.data()) / mk;
                wz = W * z;
                wzt = W * zt;
            }
            for (int a = 0; a < 3; ++a) {
                wz_[3 * k + a] = wz[a];
                wzt_[3 * k + a] = wzt[a];
                for (int b = 0; b < 3; ++b) {
                    W_[9 * k + 3 * a + b] = 0.5 * (W(a, b) + W(b, a));
                }
            }
            for (int a = 0; a < 9; ++a) {
                *wexp_slots_[9 * k + a] = -W_[9 * k + a] - (a % 4 == 0 ? kStaticReg : 0.0);
            }
        }
    }
    return ldl_.factor(K_, kPivotFloor, kPivotRegularization);
}

void InteriorPoint::apply_w(const Vec& v, Vec& out) const
{
    out.resize(v.size());
    for (std::size_t i = 0; i < pb_.l; ++i) {
        out[static_cast<int>(i)] = Wlin_[i] * v[static_cast<int>(i)];
    }
    for (std::size_t k = 0; k < pb_.e; ++k) {
        const int r0 = static_cast<int>(pb_.l + 3 * k);
        const double* w = &W_[9 * k];
        for (int a = 0; a < 3; ++a) {
            out[r0 + a] = w[3 * a] * v[r0] + w[3 * a + 1] * v[r0 + 1] + w[3 * a + 2] * v[r0 + 2];
        }
    }
}

void InteriorPoint::solve_kkt(const Vec& rx, const Vec& ry, const Vec& rz, Vec& dx, Vec& dy, Vec& dz)
{
    const int N = nv_ + np_ + nm_;
    Vec rhs(N);
    rhs << rx, ry, rz;
    Vec sol = rhs;
    ldl_.solve(sol);
    // Refine against the unregularized matrix.
    Vec wz;
    double last = std::numeric_limits<double>::infinity();
    const double target = 1e-14 * (1.0 + inf_norm(rhs));
    for (int step = 0; step < kRefinementSteps; ++step) {
        const auto sx = sol.head(nv_);
        const auto sy = sol.segment(nv_, np_);
        const Vec sz = sol.tail(nm_);
        apply_w(sz, wz);
        Vec res(N);
        res.head(nv_) = rx - At_ * sy - Gt_ * sz;
        res.segment(nv_, np_) = ry - pb_.A * sx;
        res.tail(nm_) = rz - pb_.G * sx + wz;
        const double err = inf_norm(res);
        last_refine_error_ = err / (1.0 + inf_norm(rhs));
        if (err <= target || err >= 0.5 * last) {
            break;
        }
        last = err;
        ldl_.solve(res);
        sol += res;
    }
    dx = sol.head(nv_);
    dy = sol.segment(nv_, np_);
    dz = sol.tail(nm_);
}

bool InteriorPoint::interior(const Iterate& it, const Direction& d, double alpha) const
{
    if (it.tau + alpha * d.tau <= 0.0 || it.kappa + alpha * d.kappa <= 0.0) {
        return false;
    }
    if (pb_.e == 0) {
        return true;
    }
    std::vector<double> s(3 * pb_.e);
    std::vector<double> z(3 * pb_.e);
    for (std::size_t i = 0; i < 3 * pb_.e; ++i) {
        const int r = static_cast<int>(pb_.l + i);
        s[i] = it.s[r] + alpha * d.s[r];
        z[i] = it.z[r] + alpha * d.z[r];
    }
    return k_.exp_primal_outside(s.data(), pb_.e) == 0 && k_.exp_dual_outside(z.data(), pb_.e) == 0;
}

double InteriorPoint::max_step(const Iterate& it, const Direction& d) const
{
    double alpha = 1.0;
    if (pb_.l > 0) {
        alpha = std::min(alpha, k_.max_step(it.s.data(), d.s.data(), pb_.l));
        alpha = std::min(alpha, k_.max_step(it.z.data(), d.z.data(), pb_.l));
    }
    if (d.tau < 0.0) {
        alpha = std::min(alpha, -it.tau / d.tau);
    }
    if (d.kappa < 0.0) {
        alpha = std::min(alpha, -it.kappa / d.kappa);
    }
    if (interior(it, d, alpha)) {
        return alpha;
    }
    double lo = 0.0;
    double hi = alpha;
    for (int k = 0; k < 40; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (interior(it, d, mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

bool InteriorPoint::centered(const Iterate& it, const Direction& d, double alpha)
{
    const Vec s = it.s + alpha * d.s;
    const Vec z = it.z + alpha * d.z;
    const double tau = it.tau + alpha * d.tau;
    const double kappa = it.kappa + alpha * d.kappa;
    const double m = (dot(s, z) + tau * kappa) / (pb_.barrier_degree() + 1.0);
    if (!(m > 0.0)) {
        return false;
    }
    if (tau * kappa < kNeighborhood * m) {
        return false;
    }
    for (std::size_t i = 0; i < pb_.l; ++i) {
        if (s[static_cast<int>(i)] * z[static_cast<int>(i)] < kNeighborhood * m) {
            return false;
        }
    }
    if (pb_.e == 0) {
        return true;
    }
    for (std::size_t k = 0; k < pb_.e; ++k) {
        const int r0 = static_cast<int>(pb_.l + 3 * k);
        const double mk = s.segment<3>(r0).dot(z.segment<3>(r0)) / 3.0;
        if (mk < kNeighborhood * m) {
            return false;
        }
    }
    return true;
}

void InteriorPoint::unscale(const Iterate& it, std::vector<double>& x, std::vector<double>& y,
                            std::vector<double>& z, double divisor) const
{
    x.assign(orig_.num_vars, 0.0);
    for (std::size_t j = 0; j < pb_.n; ++j) {
        x[pb_.kept_var[j]] = pb_.F[static_cast<int>(j)] * it.x[static_cast<int>(j)] / divisor;
    }
    y.assign(orig_.num_eq, 0.0);
    for (std::size_t i = 0; i < pb_.p; ++i) {
        y[pb_.kept_eq[i]] = pb_.D[static_cast<int>(i)] * it.y[static_cast<int>(i)] / divisor;
    }
    z.assign(orig_.num_cone_rows(), 0.0);
    for (std::size_t i = 0; i < pb_.m(); ++i) {
        z[pb_.kept_row[i]] = pb_.E[static_cast<int>(i)] * it.z[static_cast<int>(i)] / divisor;
    }
}

SolveResult InteriorPoint::run()
{
    SolveResult result;
    Iterate it;
    it.x = Vec::Zero(nv_);
    it.y = Vec::Zero(np_);
    it.s = Vec::Ones(nm_);
    for (std::size_t k = 0; k < pb_.e; ++k) {
        const int r0 = static_cast<int>(pb_.l + 3 * k);
        it.s[r0] = kExpCenter[0];
        it.s[r0 + 1] = kExpCenter[1];
        it.s[r0 + 2] = kExpCenter[2];
    }
    it.z = it.s;

    const double nb = std::max(1.0, inf_norm(pb_.b));
    const double nh = std::max(1.0, inf_norm(pb_.h));
    const double nc = std::max(1.0, inf_norm(pb_.c));
    // Unscaled norms for relative tests.
    double nc_orig = 1.0;
    for (double v : orig_.c) {
        nc_orig = std::max(nc_orig, std::abs(v));
    }
    (void)nb;
    (void)nh;
    (void)nc;

    Vec R1, R2, R3;
    double R4 = 0.0;
    int stall = 0;
    double best_merit = std::numeric_limits<double>::infinity();

    for (int iter = 0;; ++iter) {
        result.iterations = iter;
        R1 = At_ * it.y + Gt_ * it.z + pb_.c * it.tau;
        R2 = -(pb_.A * it.x) + pb_.b * it.tau;
        R3 = -(pb_.G * it.x) + pb_.h * it.tau - it.s;
        const double cx = dot(pb_.c, it.x);
        const double by = dot(pb_.b, it.y);
        const double hz = dot(pb_.h, it.z);
        R4 = -cx - by - hz - it.kappa;
        const double m = mu(it);

        // Termination on the unscaled problem.
        std::vector<double> xu, yu, zu;
        unscale(it, xu, yu, zu, it.tau);
        const CanonicalResiduals res = residuals(orig_, xu);
        // Dual residual A'y + G'z + c in original units.
        Vec dres_scaled = R1 / it.tau;
        double dres = 0.0;
        for (int j = 0; j < nv_; ++j) {
            dres = std::max(dres, std::abs(dres_scaled[j] / pb_.F[j]));
        }
        const double pobj = cx / it.tau;
        const double dobj = -(by + hz) / it.tau;
        const double gap = dot(it.s, it.z) / (it.tau * it.tau);
        // Objective difference is the gap estimate. Near convergence s'z is
        // rounding noise on large iterates, so it only guards against a
        // coincidental match of the two objectives early on.
        const double rel_gap = std::abs(pobj - dobj) / std::max(1.0, std::min(std::abs(pobj), std::abs(dobj)));
        const bool gap_ok = rel_gap <= cfg_.gap_tol && gap <= std::sqrt(cfg_.gap_tol) * std::max(1.0, std::abs(pobj));
        if (cfg_.verbosity > 0) {
            std::fprintf(stderr, "%3d pobj %+.9e dobj %+.9e pres %.2e dres %.2e gap %.2e mu %.2e tau %.2e kap %.2e\n",
                         iter, pobj + orig_.objective_offset, dobj + orig_.objective_offset, res.max(), dres,
                         rel_gap, m, it.tau, it.kappa);
        }
        if (res.max() <= cfg_.feasibility_tol && dres <= cfg_.feasibility_tol * nc_orig &&
            gap_ok) {
            result.status = SolveStatus::Optimal;
            result.x = std::move(xu);
            result.y = std::move(yu);
            result.z = std::move(zu);
            // Removed rows are empty, so their slack is h.
            result.s = orig_.h;
            for (std::size_t i = 0; i < pb_.m(); ++i) {
                result.s[pb_.kept_row[i]] = it.s[static_cast<int>(i)] / (pb_.E[static_cast<int>(i)] * it.tau);
            }
            result.residuals = res;
            result.dual_residual = dres;
            result.relative_gap = rel_gap;
            double obj = orig_.objective_offset;
            for (std::size_t j = 0; j < orig_.num_vars; ++j) {
                obj += orig_.c[j] * result.x[j];
            }
            result.objective = obj;
            return result;
        }
        // Infeasibility certificates from the homogeneous embedding.
        if (by + hz < 0.0) {
            const Vec ray = At_ * it.y + Gt_ * it.z;
            double rnorm = 0.0;
            for (int j = 0; j < nv_; ++j) {
                rnorm = std::max(rnorm, std::abs(ray[j] / pb_.F[j]));
            }
            if (rnorm / -(by + hz) <= cfg_.feasibility_tol) {
                result.status = SolveStatus::Infeasible;
                unscale(it, result.x, result.y, result.z, -(by + hz));
                result.x.clear();
                result.message = "primal infeasibility certificate found";
                return result;
            }
        }
        if (cx < 0.0) {
            const Vec ax = pb_.A * it.x;
            const Vec gxs = pb_.G * it.x + it.s;
            double pr = 0.0;
            for (int i = 0; i < np_; ++i) {
                pr = std::max(pr, std::abs(ax[i] / pb_.D[i]));
            }
            for (int i = 0; i < nm_; ++i) {
                pr = std::max(pr, std::abs(gxs[i] / pb_.E[i]));
            }
            if (pr / -cx <= cfg_.feasibility_tol) {
                result.status = SolveStatus::Unbounded;
                unscale(it, result.x, result.y, result.z, -cx);
                result.y.clear();
                result.z.clear();
                result.message = "improving ray found";
                return result;
            }
        }
        if (iter >= cfg_.max_iterations) {
            result.status = SolveStatus::IterationLimit;
            result.x = std::move(xu);
            result.residuals = res;
            result.message = "iteration limit reached";
            return result;
        }
        const double merit = std::max(res.max(), std::max(dres, rel_gap));
        if (merit < 0.999 * best_merit) {
            best_merit = merit;
            stall = 0;
        } else if (++stall > 30) {
            result.status = SolveStatus::NumericalTrouble;
            result.x = std::move(xu);
            result.residuals = res;
            result.message = "no progress";
            return result;
        }

        if (!factor(it)) {
            result.status = SolveStatus::NumericalTrouble;
            result.x = std::move(xu);
            result.residuals = res;
            result.message = "KKT factorization failed";
            return result;
        }

        Vec d1x, d1y, d1z;
        solve_kkt(-pb_.c, pb_.b, pb_.h, d1x, d1y, d1z);
        const double denom_base = -dot(pb_.c, d1x) - dot(pb_.b, d1y) - dot(pb_.h, d1z);

        // wrc is W applied to the complementarity right-hand side; the cone
        // parts W z and W (-grad F(s)) come from the scaling itself.
        auto direction = [&](double eta, const Vec& wrc, double rk) {
            Direction d;
            Vec d2x, d2y, d2z;
            solve_kkt(-eta * R1, eta * R2, eta * R3 + wrc, d2x, d2y, d2z);
            const double num = -eta * R4 - rk + dot(pb_.c, d2x) + dot(pb_.b, d2y) + dot(pb_.h, d2z);
            d.tau = num / (it.kappa / it.tau + denom_base);
            d.x = d2x + d.tau * d1x;
            d.y = d2y + d.tau * d1y;
            d.z = d2z + d.tau * d1z;
            apply_w(d.z, d.s);
            d.s = -d.s - wrc;
            d.kappa = -rk - (it.kappa / it.tau) * d.tau;
            return d;
        };

        // Predictor.
        Vec wz = it.s;
        for (std::size_t i = 0; i < 3 * pb_.e; ++i) {
            wz[static_cast<int>(pb_.l + i)] = wz_[i];
        }
        const Direction aff = direction(1.0, wz, it.kappa);
        const double alpha_aff = max_step(it, aff);
        const double sigma = std::clamp(std::pow(1.0 - alpha_aff, 3.0), 0.0, 1.0);

        // Corrector, with the second-order (LP) and third-order (exp cone)
        // terms; when those terms spoil the step, the plain centering
        // direction is tried as well.
        auto corrector = [&](double weight, double& alpha, int& backtracks) {
            Vec wrc(nm_);
            for (std::size_t i = 0; i < pb_.l; ++i) {
                const int r = static_cast<int>(i);
                wrc[r] = Wlin_[i] * (it.z[r] - sigma * m / it.s[r] + weight * aff.s[r] * aff.z[r] / it.s[r]);
            }
            for (std::size_t k = 0; k < pb_.e; ++k) {
                const int r0 = static_cast<int>(pb_.l + 3 * k);
                Eigen::Vector3d eta = Eigen::Vector3d::Zero();
                if (weight > 0.0) {
                    const Eigen::Vector3d u = aff.s.segment<3>(r0);
                    const Eigen::Vector3d v = exp_inverse_hessian(it.s.data() + r0) * aff.z.segment<3>(r0);
                    eta = -0.5 * weight * exp_third_derivative(it.s.data() + r0, u, v);
                }
                const Eigen::Map<const Eigen::Matrix<double, 3, 3, Eigen::RowMajor>> w(&W_[9 * k]);
                const Eigen::Vector3d weta = w * eta;
                for (int a = 0; a < 3; ++a) {
                    wrc[r0 + a] = wz_[3 * k + a] - sigma * m * wzt_[3 * k + a] + weta[a];
                }
            }
            const double rk = it.kappa - sigma * m / it.tau + weight * aff.tau * aff.kappa / it.tau;
            Direction dir = direction(1.0 - sigma, wrc, rk);
            alpha = kStepFactor * max_step(it, dir);
            backtracks = 0;
            while (backtracks < 60 && !centered(it, dir, alpha)) {
                alpha *= 0.8;
                ++backtracks;
            }
            return dir;
        };
        double alpha = 0.0;
        int backtracks = 0;
        Direction d = corrector(1.0, alpha, backtracks);
        if (alpha < 0.5) {
            double alpha2 = 0.0;
            int backtracks2 = 0;
            Direction d2 = corrector(0.0, alpha2, backtracks2);
            if (alpha2 > alpha) {
                d = std::move(d2);
                alpha = alpha2;
                backtracks = backtracks2;
            }
        }
        if (cfg_.verbosity > 1) {
            std::fprintf(stderr, "    a_aff %.3e sigma %.3e alpha %.3e backtracks %d refine %.1e regularized %d\n",
                         alpha_aff, sigma, alpha, backtracks, last_refine_error_, ldl_.regularized_pivots());
        }
        if (alpha < 1e-12) {
            result.status = SolveStatus::NumericalTrouble;
            result.x = std::move(xu);
            result.residuals = res;
            result.message = "step length collapsed";
            return result;
        }
        it.x += alpha * d.x;
        it.y += alpha * d.y;
        it.z += alpha * d.z;
        it.s += alpha * d.s;
        it.tau += alpha * d.tau;
        it.kappa += alpha * d.kappa;
    }
}

}  // namespace

SolveResult solve(const CanonicalProgram& p, const SolverConfig& config)
{
    const auto start = std::chrono::steady_clock::now();
    p.validate();
    config.validate();
    Problem pb;
    const auto pre = presolve(p, pb);
    SolveResult result;
    if (pre.decided) {
        result.status = *pre.decided;
        result.message = pre.message;
    } else if (pb.n == 0) {
        // Nothing left to optimize: every constraint is data-only and consistent.
        result.status = SolveStatus::Optimal;
        result.x.assign(p.num_vars, 0.0);
        result.y.assign(p.num_eq, 0.0);
        result.z.assign(p.num_cone_rows(), 0.0);
        result.residuals = residuals(p, result.x);
        result.objective = p.objective_offset;
        if (result.residuals.max() > config.feasibility_tol) {
            result.status = SolveStatus::Infeasible;
            result.message = "constant constraints violated";
        }
    } else {
        equilibrate(pb);
        InteriorPoint ipm(pb, config, p);
        result = ipm.run();
    }
    result.solve_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace symsage
