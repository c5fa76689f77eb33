#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace symsage {

struct Triplet {
    std::size_t row = 0;
    std::size_t col = 0;
    double value = 0.0;
};

/// minimize c'x + offset  s.t.  A x = b,  h - G x in K,
/// K = R_+^{num_linear} x K_exp^{num_exp}, the exponential-cone rows coming
/// last in triples (x, y, z) for cl{y > 0, y exp(x/y) <= z}.
struct CanonicalProgram {
    std::size_t num_vars = 0;
    std::vector<std::string> var_names;
    std::vector<double> c;
    double objective_offset = 0.0;

    std::size_t num_eq = 0;
    std::vector<Triplet> A;
    std::vector<double> b;

    std::size_t num_linear = 0;
    std::size_t num_exp = 0;
    std::vector<Triplet> G;
    std::vector<double> h;

    std::size_t num_cone_rows() const { return num_linear + 3 * num_exp; }
    /// Throws std::invalid_argument on inconsistent dimensions or non-finite data.
    void validate() const;
};

nlohmann::json to_json(const CanonicalProgram& p);
CanonicalProgram canonical_from_json(const nlohmann::json& document);

/// Euclidean projection onto the exponential cone.
std::array<double, 3> project_exp_cone(const std::array<double, 3>& v);
double exp_cone_distance(const std::array<double, 3>& v);

struct CanonicalResiduals {
    double equality = 0.0;    // max |A x - b|
    double inequality = 0.0;  // max (G x - h)_+ over linear rows
    double cone = 0.0;        // max distance of h - G x to K_exp per triple
    double max() const;
};

CanonicalResiduals residuals(const CanonicalProgram& p, std::span<const double> x);

enum class SolveStatus { Optimal, Infeasible, Unbounded, IterationLimit, NumericalTrouble };

std::string to_string(SolveStatus status);

struct SolverConfig {
    double feasibility_tol = 1e-8;
    double gap_tol = 1e-8;
    int max_iterations = 100000;
    int verbosity = 0;

    void validate() const;
    /// Defaults overridden by SYMSAGE_FEAS_TOL / SYMSAGE_GAP_TOL when set.
    static SolverConfig from_environment();
};

struct SolveResult {
    SolveStatus status = SolveStatus::NumericalTrouble;
    double objective = 0.0;          // c'x + offset at the returned point
    std::vector<double> x;           // primal point (or improving ray when Unbounded)
    std::vector<double> y;           // equality multipliers (or infeasibility certificate)
    std::vector<double> z;           // cone multipliers
    std::vector<double> s;           // cone slacks h - G x (Optimal only)
    CanonicalResiduals residuals;
    double dual_residual = 0.0;
    double relative_gap = 0.0;
    int iterations = 0;
    double solve_seconds = 0.0;
    std::string message;
};

/// Homogeneous self-dual primal-dual interior-point method.
SolveResult solve(const CanonicalProgram& p, const SolverConfig& config = {});

nlohmann::json to_json(const SolveResult& r, bool include_point = true);

}  // namespace symsage
