#pragma once

#include "symsage/certificate.hpp"
#include "symsage/program.hpp"

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace symsage {

struct Family {
    std::string name;
    std::size_t n = 0;
    Signomial f{1};
    PermutationGroup group = PermutationGroup::trivial(1);
};

/// Families with an orbit of size n! are capped here unless told otherwise.
inline constexpr std::size_t kFactorialFamilyCap = 8;

/// f1, f2, f3, f4 or g at dimension n >= 2, invariant under S_n. Throws
/// std::invalid_argument for an unknown name or n < 2, std::length_error
/// when a factorial-orbit family exceeds the cap.
Family generate_family(const std::string& name, std::size_t n, std::size_t cap = kFactorialFamilyCap);

bool has_factorial_orbit(const std::string& family);

struct MethodResult {
    ProgramMode mode = ProgramMode::Reduced;
    SolveStatus status = SolveStatus::NumericalTrouble;
    double bound = 0.0;
    std::size_t variables = 0;
    std::size_t constraints = 0;
    double build_seconds = 0.0;
    double solve_seconds = 0.0;
    double total_seconds = 0.0;
    int iterations = 0;
    /// Set when the solve was Optimal and verification ran.
    std::optional<bool> certificate_passed;
    std::string message;
};

struct BenchmarkRow {
    std::string family;
    std::size_t n = 0;
    std::vector<MethodResult> methods;

    const MethodResult* find(ProgramMode mode) const;
    /// Both methods Optimal and |bound_std - bound_sym| <= 1e-5 max(1, |bound|);
    /// true when fewer than two methods are Optimal.
    bool bounds_agree() const;
};

struct BenchmarkOptions {
    std::vector<ProgramMode> modes{ProgramMode::Standard, ProgramMode::Reduced};
    SolverConfig solver;
    bool verify = true;
    double verify_tol = 1e-6;
    std::size_t cap = kFactorialFamilyCap;
};

/// Builds, solves and verifies one family member per mode. Solver failures
/// are recorded in the row. Throws std::logic_error when a built program's
/// size differs from the prediction.
BenchmarkRow run_row(const Family& family, const BenchmarkOptions& options = {});

std::vector<BenchmarkRow> run_benchmark(const std::string& family, const std::vector<std::size_t>& ns,
                                        const BenchmarkOptions& options = {});

/// Human-readable table in the column order dim, bound, then V, C, t_s, t_r
/// per method.
std::string render_table(const std::vector<BenchmarkRow>& rows);

nlohmann::json to_json(const BenchmarkRow& row, bool include_timing = true);

}  // namespace symsage
