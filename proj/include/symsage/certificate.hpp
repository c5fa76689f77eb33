#pragma once

#include "symsage/program.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace symsage {

/// Smallest floor applied to negative solver values.
inline constexpr double kFloorThreshold = 1e-12;

/// Values shared by every inner exponent in one Stab(beta)-class.
struct CertificateClass {
    ExponentVector representative;
    BigInt size = 1;
    std::size_t inner = 0;  // index into ReducedCertificate::inner
    double c = 0.0;
    double nu = 0.0;
};

struct CertificateBlock {
    ExponentVector beta;
    BigInt orbit_size = 1;
    bool is_origin = false;
    /// Coefficient at beta of every summand in this block (negative for an
    /// ordinary outer term, free-sign for the origin block).
    double beta_coefficient = 0.0;
    std::vector<CertificateClass> classes;
    std::vector<std::vector<int>> coordinate_blocks;
    /// Box auxiliaries per coordinate block; empty without a box.
    std::vector<double> w_pos;
    std::vector<double> w_neg;
};

struct ReducedCertificate {
    static constexpr int kVersion = 1;

    ProgramMode mode = ProgramMode::Reduced;
    Objective objective = Objective::Feasibility;
    OriginMode origin = OriginMode::Inner;
    PermutationGroup group = PermutationGroup::trivial(1);
    std::size_t dimension = 0;
    SupportOracle support;
    std::vector<InnerOrbit> inner;
    std::vector<CertificateBlock> blocks;
    std::optional<double> lambda;
    std::optional<double> scale;
};

/// Reads the witness off a solved program. Negative values down to
/// -max(1e-12, 10 * reported primal residual) become 0, as does nu at that
/// level when its c was zeroed; larger negatives are kept so that
/// verification rejects them. Slack left in
/// a coefficient budget (or a residual-sized overdraft) is settled on the
/// first class drawing on that budget, so every budget holds with equality.
ReducedCertificate extract_certificate(const ConicProgram& program, const ProgramSolution& solution);

struct AGETerm {
    ExponentVector alpha;
    double c = 0.0;
    double nu = 0.0;
};

/// One AGE signomial sum_alpha c_alpha e^<alpha> + beta_coefficient e^<beta>.
struct AGESummand {
    std::size_t block = 0;
    ExponentVector beta;
    double beta_coefficient = 0.0;
    std::vector<AGETerm> terms;

    Signomial to_signomial(std::size_t dimension) const;
};

struct AGEDecomposition {
    std::size_t dimension = 0;
    std::vector<AGESummand> summands;
    /// Positive terms of the target that no block draws on.
    Signomial remainder{1};
};

/// Calls visit once per summand rho h_beta, block by block, without keeping
/// them. Throws std::length_error when an orbit exceeds the budget.
void for_each_summand(const ReducedCertificate& cert, const std::function<void(const AGESummand&)>& visit,
                      std::size_t budget = kOrbitBudget);

AGEDecomposition expand_certificate(const ReducedCertificate& cert, std::size_t budget = kOrbitBudget);

/// The signomial a certificate claims to be SAGE: f, f - lambda, or
/// f_+ + delta f_-.
Signomial certified_target(const Signomial& f, const ReducedCertificate& cert);

struct VerificationCheck {
    std::string name;
    double violation = 0.0;
    bool passed = false;
    std::string detail;
};

struct VerificationReport {
    std::vector<VerificationCheck> checks;
    bool passed = false;

    const VerificationCheck& check(const std::string& name) const;
};

/// Re-evaluates the reduced conditions (balance equalities, entropy
/// inequalities, coefficient budgets, nonnegativity), the structure against
/// f, and the reconstruction of the target from the expanded summands,
/// including a per-summand AGE check in the full space. Violations are
/// relative to max(1, magnitude of the row). Never throws on bad data.
VerificationReport verify_certificate(const Signomial& f, const ReducedCertificate& cert, double tol = 1e-6,
                                      std::size_t budget = kOrbitBudget);

nlohmann::json to_json(const ReducedCertificate& cert);
ReducedCertificate certificate_from_json(const nlohmann::json& document);
nlohmann::json to_json(const VerificationReport& report);

}  // namespace symsage
