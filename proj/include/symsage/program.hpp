#pragma once

#include "symsage/bigint.hpp"
#include "symsage/combinatorics.hpp"
#include "symsage/conic.hpp"
#include "symsage/group.hpp"
#include "symsage/signomial.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace symsage {

/// Constraint set K for K-SAGE certificates: all of R^n or an axis-aligned box.
struct SupportOracle {
    enum class Kind { FreeSpace, Box };

    Kind kind = Kind::FreeSpace;
    std::vector<double> lower;
    std::vector<double> upper;

    static SupportOracle free_space() { return {}; }
    /// Throws unless lower <= upper componentwise and all bounds are finite.
    static SupportOracle box(std::vector<double> lower, std::vector<double> upper);
    bool is_box() const { return kind == Kind::Box; }
};

/// sup_{x in K} <v, x>; +inf for R^n unless v == 0.
double support_value(const SupportOracle& k, std::span<const double> v);

enum class OriginMode {
    /// The zero exponent is an inner term with coefficient c0 - lambda.
    Inner,
    /// As Inner, and the zero exponent also owns an AGE block whose free-sign
    /// right-hand side is what remains of c0 - lambda.
    Free,
};

std::string to_string(OriginMode mode);

enum class VarKind { Nu, C, Lambda, Scale, SupportPos, SupportNeg };

struct Variable {
    std::string name;
    bool nonnegative = true;
    VarKind kind = VarKind::Nu;
    int block = -1;  // owning block for Nu, C and support auxiliaries
    int cls = -1;    // suborbit class within the block, or coordinate orbit for auxiliaries
};

struct LinearTerm {
    std::size_t var = 0;
    double coef = 0.0;
};

struct LinearRow {
    std::vector<LinearTerm> terms;
    double rhs = 0.0;
    std::string label;
};

struct EntropyTerm {
    std::size_t nu = 0;
    std::size_t c = 0;
    double weight = 1.0;
};

/// sum_k weight_k nu_k ln(nu_k / (e c_k)) + sum lhs_linear <= rhs.
struct RelEntropyBlock {
    std::size_t block = 0;
    std::vector<EntropyTerm> terms;
    std::vector<LinearTerm> lhs_linear;
    double rhs = 0.0;
};

/// Inner orbit (positive coefficients), represented by its canonical element.
struct InnerOrbit {
    ExponentVector representative;
    double coefficient = 0.0;
    BigInt orbit_size = 1;
    bool is_origin = false;
};

/// One AGE block per outer orbit representative (and one for the origin in Free mode).
struct BlockInfo {
    ExponentVector beta;
    double coefficient = 0.0;  // c_beta; for the origin block, c0
    BigInt orbit_size = 1;
    bool is_origin = false;
    std::vector<OrbitClass> classes;        // Stab(beta)-classes of the inner set, no elements
    std::vector<std::size_t> class_inner;   // inner orbit index of each class
    std::vector<std::size_t> nu_vars;
    std::vector<std::size_t> c_vars;
    std::vector<std::vector<int>> coordinate_blocks;  // coordinate orbits of Stab(beta)
    std::vector<std::size_t> support_pos;   // box auxiliaries per coordinate block
    std::vector<std::size_t> support_neg;
};

enum class Objective { Feasibility, MaximizeLambda, MaximizeScale };

struct ProgramMetadata {
    ProgramMode mode = ProgramMode::Reduced;
    Objective objective = Objective::Feasibility;
    OriginMode origin = OriginMode::Inner;
    PermutationGroup group = PermutationGroup::trivial(1);
    std::size_t dimension = 0;
    SupportOracle support;
    std::vector<InnerOrbit> inner;
    std::vector<BlockInfo> blocks;
    std::optional<std::size_t> lambda_var;
    std::optional<std::size_t> scale_var;
};

/// Relative entropy program: maximize objective' x subject to linear rows,
/// entropy blocks, and nonnegativity of flagged variables.
struct ConicProgram {
    std::vector<Variable> variables;
    std::vector<double> objective;
    std::vector<LinearRow> equalities;
    std::vector<LinearRow> inequalities;  // terms . x <= rhs
    std::vector<RelEntropyBlock> blocks;
    ProgramMetadata meta;

    std::size_t num_variables() const { return variables.size(); }
    std::size_t num_equalities() const { return equalities.size(); }
    /// Linear inequality rows plus one row per entropy block.
    std::size_t num_inequalities() const { return inequalities.size() + blocks.size(); }
    std::size_t num_constraints() const { return num_equalities() + num_inequalities(); }
};

struct BuildOptions {
    SupportOracle support;
    OriginMode origin = OriginMode::Inner;
    /// Permit multiplicities above 2^53 (converted with rounding).
    bool allow_inexact_counts = false;
    /// Relative tolerance for the coefficient invariance check.
    double invariance_tol = 1e-9;
    /// Builders throw std::length_error when the predicted variable count is larger.
    std::uint64_t max_variables = 20'000'000;
};

/// Prop-2.1-style program on the full support (trivial group).
ConicProgram build_membership_standard(const Signomial& f, const BuildOptions& options = {});

/// Symmetry-reduced membership program for a G-invariant signomial.
ConicProgram build_membership_reduced(const Signomial& f, const PermutationGroup& group,
                                      const BuildOptions& options = {});

/// maximize lambda s.t. f - lambda is (K-)SAGE; the origin is added to the
/// support when absent.
ConicProgram build_bound_program(const Signomial& f, const PermutationGroup& group, ProgramMode mode,
                                 const BuildOptions& options = {});

/// maximize delta s.t. f_+ + delta * f_- is (K-)SAGE, where f_+ and f_- are
/// the positive and negative parts of f.
ConicProgram build_scale_program(const Signomial& f, const PermutationGroup& group, ProgramMode mode,
                                 const BuildOptions& options = {});

/// Sizes predicted for the program the builders would emit, without building it.
SizePrediction predict_program_sizes(const Signomial& f, const PermutationGroup& group, ProgramMode mode,
                                     Objective objective, const BuildOptions& options = {});

/// Exponential-cone form. Variables 0..n-1 are the program's; epigraph
/// variables follow. Linear rows are normalized by their largest coefficient.
struct CanonicalForm {
    CanonicalProgram program;
    std::size_t num_program_vars = 0;
    double objective_sign = -1.0;  // program objective = objective_sign * canonical objective
    /// Cone row whose slack equals each sign-constrained program variable, or -1.
    std::vector<std::ptrdiff_t> slack_row;
};

CanonicalForm canonicalize(const ConicProgram& p);

struct ProgramResiduals {
    double equality = 0.0;       // row-normalized
    double inequality = 0.0;     // row-normalized
    double nonnegativity = 0.0;
    double entropy = 0.0;        // positive part of block value minus rhs
    double max() const;
};

ProgramResiduals residuals(const ConicProgram& p, std::span<const double> point);

struct ProgramSolution {
    SolveResult result;
    std::vector<double> values;  // program variables only
    double objective = 0.0;      // in the program's (maximization) sense
};

ProgramSolution solve_program(const ConicProgram& p, const SolverConfig& config = {});

/// Canonical program JSON plus the program-level names and metadata summary.
nlohmann::json export_program(const ConicProgram& p);

}  // namespace symsage
