#include <doctest.h>

#include "symsage/conic.hpp"

#include <cmath>
#include <random>

using namespace symsage;

namespace {

/// Tight one-dimensional AM/GM instance: 1/2 e^{2x} + 1/2 e^{-2x} + c_beta.
/// Variables nu1 nu2 c1 c2 t1 t2.
CanonicalProgram amgm(double c_beta)
{
    CanonicalProgram p;
    p.num_vars = 6;
    p.c.assign(6, 0.0);
    p.num_eq = 1;
    p.A = {{0, 0, 2.0}, {0, 1, -2.0}};
    p.b = {0.0};
    p.num_linear = 3;
    p.num_exp = 2;
    // t1 + t2 <= c_beta ; c1 <= 1/2 ; c2 <= 1/2
    p.G = {{0, 4, 1.0}, {0, 5, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}};
    p.h = {c_beta, 0.5, 0.5};
    for (std::size_t k = 0; k < 2; ++k) {
        const std::size_t r = 3 + 3 * k;
        // (-t - nu, nu, c) in K_exp
        p.G.push_back({r, 4 + k, 1.0});
        p.G.push_back({r, k, 1.0});
        p.G.push_back({r + 1, k, -1.0});
        p.G.push_back({r + 2, 2 + k, -1.0});
        p.h.insert(p.h.end(), {0.0, 0.0, 0.0});
    }
    return p;
}

}  // namespace

TEST_CASE("pure LP: maximize lambda with lambda <= 3")
{
    CanonicalProgram p;
    p.num_vars = 1;
    p.c = {-1.0};
    p.num_linear = 1;
    p.G = {{0, 0, 1.0}};
    p.h = {3.0};
    auto r = solve(p);
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(-r.objective == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(r.residuals.max() <= 1e-8);
}

TEST_CASE("exp cone: minimize t with t >= e^x-style epigraph")
{
    // minimize z s.t. (1, 1, z) in K_exp  ->  z* = e.
    CanonicalProgram p;
    p.num_vars = 1;
    p.c = {1.0};
    p.num_exp = 1;
    p.G = {{2, 0, -1.0}};
    p.h = {1.0, 1.0, 0.0};
    auto r = solve(p);
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.objective == doctest::Approx(std::exp(1.0)).epsilon(1e-7));
}

TEST_CASE("tight AM/GM feasibility and its infeasible perturbation")
{
    auto feasible = solve(amgm(-1.0));
    CHECK(feasible.status == SolveStatus::Optimal);
    CHECK(feasible.residuals.max() <= 1e-8);

    auto infeasible = solve(amgm(-1.01));
    CHECK(infeasible.status == SolveStatus::Infeasible);
}

TEST_CASE("unbounded LP")
{
    CanonicalProgram p;
    p.num_vars = 1;
    p.c = {-1.0};
    p.num_linear = 1;
    p.G = {{0, 0, -1.0}};
    p.h = {0.0};
    auto r = solve(p);
    CHECK(r.status == SolveStatus::Unbounded);
}

TEST_CASE("residuals of hand-built points")
{
    auto p = amgm(-1.0);
    std::vector<double> x{0.5, 0.5, 0.5, 0.5, -0.5, -0.5};
    auto res = residuals(p, x);
    CHECK(res.max() <= 1e-12);
    x[0] += 0.1;
    res = residuals(p, x);
    CHECK(res.equality >= 0.09);
}

TEST_CASE("exponential cone projection")
{
    std::mt19937 rng(9);
    std::normal_distribution<double> normal(0.0, 2.0);
    for (int trial = 0; trial < 300; ++trial) {
        std::array<double, 3> v{normal(rng), normal(rng), normal(rng)};
        const auto p = project_exp_cone(v);
        // Projection is in the cone and the residual is in the polar cone, orthogonal to p.
        const std::array<double, 3> r{v[0] - p[0], v[1] - p[1], v[2] - p[2]};
        const double ortho = p[0] * r[0] + p[1] * r[1] + p[2] * r[2];
        CHECK(std::abs(ortho) <= 1e-8 * (1.0 + std::abs(v[0]) + std::abs(v[1]) + std::abs(v[2])));
        CHECK(exp_cone_distance(p) <= 1e-9);
        // No sampled cone point is closer.
        const double d = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
        for (int k = 0; k < 50; ++k) {
            const double y = std::exp(normal(rng));
            const double rho = normal(rng);
            const double shrink = std::exp(-std::abs(normal(rng)));
            const std::array<double, 3> q{y * rho - std::abs(normal(rng)), y, y * std::exp(rho) / shrink};
            const double dq = std::sqrt((v[0] - q[0]) * (v[0] - q[0]) + (v[1] - q[1]) * (v[1] - q[1]) +
                                        (v[2] - q[2]) * (v[2] - q[2]));
            CHECK(dq >= d - 1e-9);
        }
    }
}

TEST_CASE("program JSON round trip is bit exact")
{
    auto p = amgm(-1.0 / 3.0);
    auto back = canonical_from_json(nlohmann::json::parse(to_json(p).dump()));
    CHECK(back.h == p.h);
    CHECK(back.G.size() == p.G.size());
    for (std::size_t k = 0; k < p.G.size(); ++k) {
        CHECK(back.G[k].value == p.G[k].value);
    }
}
