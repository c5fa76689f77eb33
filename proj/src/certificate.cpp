#include "symsage/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace symsage {

namespace {

/// Neumaier's variant of Kahan summation in long double.
class CompensatedSum {
public:
    void add(long double x)
    {
        if (!std::isfinite(x) || !std::isfinite(sum_)) {
            sum_ += x;
            magnitude_ += std::fabs(x);
            return;
        }
        const long double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
        magnitude_ += std::fabs(x);
    }
    long double value() const { return std::isfinite(sum_) ? sum_ + comp_ : sum_; }
    long double magnitude() const { return magnitude_; }

private:
    long double sum_ = 0.0L;
    long double comp_ = 0.0L;
    long double magnitude_ = 0.0L;
};

double floored(double v, double threshold)
{
    return (v < 0.0 && v >= -threshold) ? 0.0 : v;
}

long double to_ld(const BigRational& r)
{
    return static_cast<long double>(ratio_to_double(r, true));
}

/// Weight of class k of block b in the budget of its inner orbit.
BigRational budget_weight(const CertificateBlock& blk, const CertificateClass& cls, const InnerOrbit& io)
{
    return BigRational(blk.orbit_size * cls.size) / BigRational(io.orbit_size);
}

bool budgeted(const ReducedCertificate& cert, const InnerOrbit& io)
{
    return !(io.is_origin && cert.origin == OriginMode::Free);
}

/// nu (ln(nu / c) - 1), with 0 ln 0 = 0 and +inf when c = 0 < nu.
long double entropy_term(long double nu, long double c)
{
    if (nu <= 0.0L) {
        return 0.0L;
    }
    if (c <= 0.0L) {
        return std::numeric_limits<long double>::infinity();
    }
    return nu * (std::log(nu / c) - 1.0L);
}

std::string objective_name(Objective o)
{
    switch (o) {
    case Objective::Feasibility:
        return "feasibility";
    case Objective::MaximizeLambda:
        return "bound";
    case Objective::MaximizeScale:
        return "scale";
    }
    return "feasibility";
}

Objective parse_objective(const std::string& s)
{
    if (s == "feasibility") {
        return Objective::Feasibility;
    }
    if (s == "bound") {
        return Objective::MaximizeLambda;
    }
    if (s == "scale") {
        return Objective::MaximizeScale;
    }
    throw std::invalid_argument("unknown certificate objective '" + s + "'");
}

/// Origin block coefficient: what remains of the target's constant term after
/// the other blocks draw their shares.
long double origin_block_coefficient(const ReducedCertificate& cert, long double target_constant)
{
    CompensatedSum s;
    s.add(target_constant);
    for (const auto& blk : cert.blocks) {
        for (const auto& cls : blk.classes) {
            const InnerOrbit& io = cert.inner.at(cls.inner);
            if (io.is_origin) {
                s.add(-to_ld(budget_weight(blk, cls, io)) * cls.c);
            }
        }
    }
    return s.value();
}

}  // namespace

ReducedCertificate extract_certificate(const ConicProgram& p, const ProgramSolution& sol)
{
    if (sol.values.size() != p.num_variables()) {
        throw std::invalid_argument("solution has " + std::to_string(sol.values.size()) +
                                    " values, program has " + std::to_string(p.num_variables()) + " variables");
    }
    const auto& x = sol.values;
    // An infeasible-start method leaves nonnegative variables off by up to its
    // residual, so the floor follows the residual the solve reported.
    const double floor = std::max(kFloorThreshold, 10.0 * sol.result.residuals.max());
    ReducedCertificate cert;
    cert.mode = p.meta.mode;
    cert.objective = p.meta.objective;
    cert.origin = p.meta.origin;
    cert.group = p.meta.group;
    cert.dimension = p.meta.dimension;
    cert.support = p.meta.support;
    cert.inner = p.meta.inner;
    if (p.meta.lambda_var) {
        cert.lambda = x[*p.meta.lambda_var];
    }
    if (p.meta.scale_var) {
        cert.scale = x[*p.meta.scale_var];
    }

    for (const auto& info : p.meta.blocks) {
        CertificateBlock blk;
        blk.beta = info.beta;
        blk.orbit_size = info.orbit_size;
        blk.is_origin = info.is_origin;
        blk.coordinate_blocks = info.coordinate_blocks;
        for (std::size_t k = 0; k < info.classes.size(); ++k) {
            CertificateClass cls;
            cls.representative = info.classes[k].representative;
            cls.size = info.classes[k].size;
            cls.inner = info.class_inner[k];
            cls.c = floored(x[info.c_vars[k]], floor);
            cls.nu = floored(x[info.nu_vars[k]], floor);
            if (cls.c == 0.0 && cls.nu > 0.0 && cls.nu <= floor) {
                cls.nu = 0.0;
            }
            blk.classes.push_back(std::move(cls));
        }
        for (std::size_t q = 0; q < info.support_pos.size(); ++q) {
            blk.w_pos.push_back(floored(x[info.support_pos[q]], floor));
            blk.w_neg.push_back(floored(x[info.support_neg[q]], floor));
        }
        blk.beta_coefficient = info.coefficient * (cert.scale ? *cert.scale : 1.0);
        cert.blocks.push_back(std::move(blk));
    }

    // Budget slack goes to the first class drawing on the orbit, so the
    // expansion reproduces the target exactly.
    for (std::size_t i = 0; i < cert.inner.size(); ++i) {
        const InnerOrbit& io = cert.inner[i];
        if (!budgeted(cert, io)) {
            continue;
        }
        CompensatedSum used;
        CertificateClass* first = nullptr;
        long double first_weight = 0.0L;
        for (auto& blk : cert.blocks) {
            for (auto& cls : blk.classes) {
                if (cls.inner != i) {
                    continue;
                }
                const long double w = to_ld(budget_weight(blk, cls, io));
                used.add(w * cls.c);
                if (!first) {
                    first = &cls;
                    first_weight = w;
                }
            }
        }
        const long double target = io.coefficient - (io.is_origin && cert.lambda ? *cert.lambda : 0.0);
        const long double slack = target - used.value();
        // A small overdraft (solver residual) is taken back the same way.
        if (first && first->c + slack / first_weight >= 0.0L) {
            first->c = static_cast<double>(first->c + slack / first_weight);
        }
    }

    if (cert.origin == OriginMode::Free) {
        for (auto& blk : cert.blocks) {
            if (blk.is_origin) {
                const InnerOrbit* origin = nullptr;
                for (const auto& io : cert.inner) {
                    if (io.is_origin) {
                        origin = &io;
                    }
                }
                const long double c0 = origin ? origin->coefficient : 0.0;
                blk.beta_coefficient = static_cast<double>(
                    origin_block_coefficient(cert, c0 - (cert.lambda ? *cert.lambda : 0.0)));
            }
        }
    }
    return cert;
}

Signomial AGESummand::to_signomial(std::size_t dimension) const
{
    Signomial s(dimension);
    for (const auto& t : terms) {
        s.add_term(t.alpha, t.c);
    }
    s.add_term(beta, beta_coefficient);
    return s;
}

void for_each_summand(const ReducedCertificate& cert, const std::function<void(const AGESummand&)>& visit,
                      std::size_t budget)
{
    for (std::size_t b = 0; b < cert.blocks.size(); ++b) {
        const CertificateBlock& blk = cert.blocks[b];
        const PermutationGroup stab = stabilizer(cert.group, blk.beta);

        std::map<ExponentVector, std::size_t> class_of;
        std::set<std::size_t> inner_used;
        for (std::size_t k = 0; k < blk.classes.size(); ++k) {
            class_of.emplace(canonical_representative(stab, blk.classes[k].representative), k);
            inner_used.insert(blk.classes[k].inner);
        }

        // h_beta: every element of each inner orbit carries its class values.
        AGESummand h;
        h.block = b;
        h.beta = blk.beta;
        h.beta_coefficient = blk.beta_coefficient;
        for (std::size_t i : inner_used) {
            const OrbitClass orb = orbit(cert.group, cert.inner.at(i).representative, budget);
            for (const auto& alpha : orb.elements) {
                const auto it = class_of.find(canonical_representative(stab, alpha));
                if (it == class_of.end()) {
                    throw std::invalid_argument("exponent " + alpha.to_string() + " of inner orbit " +
                                                std::to_string(i) + " has no class in block " + std::to_string(b));
                }
                const auto& cls = blk.classes[it->second];
                h.terms.push_back({alpha, cls.c, cls.nu});
            }
        }

        for (const auto& [rho, image] : coset_representatives(cert.group, blk.beta, budget)) {
            if (rho.is_identity()) {
                visit(h);
                continue;
            }
            AGESummand moved;
            moved.block = b;
            moved.beta = image;
            moved.beta_coefficient = h.beta_coefficient;
            moved.terms.reserve(h.terms.size());
            for (const auto& t : h.terms) {
                moved.terms.push_back({act(rho, t.alpha), t.c, t.nu});
            }
            visit(moved);
        }
    }
}

AGEDecomposition expand_certificate(const ReducedCertificate& cert, std::size_t budget)
{
    AGEDecomposition out;
    out.dimension = cert.dimension;
    for_each_summand(cert, [&](const AGESummand& s) { out.summands.push_back(s); }, budget);

    std::vector<char> referenced(cert.inner.size(), 0);
    for (const auto& blk : cert.blocks) {
        for (const auto& cls : blk.classes) {
            referenced.at(cls.inner) = 1;
        }
    }
    out.remainder = Signomial(cert.dimension);
    for (std::size_t i = 0; i < cert.inner.size(); ++i) {
        const InnerOrbit& io = cert.inner[i];
        if (referenced[i] || !budgeted(cert, io)) {
            continue;
        }
        const double c = io.coefficient - (io.is_origin && cert.lambda ? *cert.lambda : 0.0);
        for (const auto& alpha : orbit(cert.group, io.representative, budget).elements) {
            out.remainder.add_term(alpha, c);
        }
    }
    return out;
}

Signomial certified_target(const Signomial& f, const ReducedCertificate& cert)
{
    Signomial g(f.dimension());
    switch (cert.objective) {
    case Objective::Feasibility:
        return f;
    case Objective::MaximizeLambda:
        g = f;
        g.add_term(zero_exponent(f.dimension()), -cert.lambda.value_or(0.0));
        return g;
    case Objective::MaximizeScale:
        for (const auto& [alpha, c] : f) {
            g.add_term(alpha, c > 0 ? c : c * cert.scale.value_or(0.0));
        }
        return g;
    }
    return g;
}

const VerificationCheck& VerificationReport::check(const std::string& name) const
{
    for (const auto& c : checks) {
        if (c.name == name) {
            return c;
        }
    }
    throw std::out_of_range("no verification check named '" + name + "'");
}

namespace {

struct Verifier {
    const Signomial& f;
    const ReducedCertificate& cert;
    double tol;
    std::size_t budget;
    Signomial g{1};

    static double relative(long double excess, long double scale)
    {
        if (!std::isfinite(excess)) {
            return std::numeric_limits<double>::infinity();
        }
        return static_cast<double>(excess / std::max(1.0L, scale));
    }

    VerificationCheck structure() const
    {
        VerificationCheck out{"structure", 0.0, false, ""};
        const auto fail = [&](std::string why) {
            out.violation = 1.0;
            out.detail = std::move(why);
            return out;
        };
        if (f.dimension() != cert.dimension || cert.group.degree() != cert.dimension) {
            return fail("dimension mismatch");
        }
        if (cert.objective == Objective::MaximizeLambda && !cert.lambda) {
            return fail("bound certificate without lambda");
        }
        if (cert.objective == Objective::MaximizeScale && !cert.scale) {
            return fail("scale certificate without delta");
        }
        if (cert.objective != Objective::MaximizeLambda && cert.origin == OriginMode::Free) {
            return fail("free origin block outside a bound certificate");
        }
        if (cert.support.is_box() && cert.support.lower.size() != cert.dimension) {
            return fail("box dimension mismatch");
        }
        if (cert.mode == ProgramMode::Reduced && !check_invariance(f, cert.group)) {
            return fail("f is not invariant under " + cert.group.describe());
        }

        // Inner and outer orbits must be exactly those of f.
        const ExponentVector origin = zero_exponent(f.dimension());
        std::map<ExponentVector, double> want_inner;
        std::set<ExponentVector> want_outer;
        for (const auto& [alpha, c] : f) {
            if (cert.objective == Objective::MaximizeLambda && alpha == origin) {
                continue;
            }
            const ExponentVector rep = canonical_representative(cert.group, alpha);
            if (c > 0) {
                want_inner[rep] = c;
            } else {
                want_outer.insert(rep);
            }
        }
        if (cert.objective == Objective::MaximizeLambda) {
            want_inner[origin] = f.coefficient(origin);
        }
        std::map<ExponentVector, std::size_t> have_inner;
        long double coef_err = 0.0L;
        for (std::size_t i = 0; i < cert.inner.size(); ++i) {
            const ExponentVector rep = canonical_representative(cert.group, cert.inner[i].representative);
            const auto it = want_inner.find(rep);
            if (it == want_inner.end() || have_inner.contains(rep)) {
                return fail("inner orbit " + rep.to_string() + " is not a positive orbit of f");
            }
            if (orbit_size(cert.group, rep) != cert.inner[i].orbit_size) {
                return fail("wrong orbit size for " + rep.to_string());
            }
            have_inner[rep] = i;
            coef_err = std::max<long double>(coef_err, std::fabs(static_cast<long double>(cert.inner[i].coefficient) - it->second) /
                                                           std::max(1.0, std::abs(it->second)));
        }
        if (have_inner.size() != want_inner.size()) {
            return fail("positive orbits of f are missing from the certificate");
        }
        std::set<ExponentVector> have_outer;
        for (const auto& blk : cert.blocks) {
            if (blk.is_origin) {
                if (cert.origin != OriginMode::Free || !blk.beta.is_zero()) {
                    return fail("unexpected origin block");
                }
                continue;
            }
            const ExponentVector rep = canonical_representative(cert.group, blk.beta);
            if (!want_outer.contains(rep) || !have_outer.insert(rep).second) {
                return fail("block " + rep.to_string() + " is not a negative orbit of f");
            }
            if (orbit_size(cert.group, rep) != blk.orbit_size) {
                return fail("wrong orbit size for block " + rep.to_string());
            }
        }
        if (have_outer != want_outer) {
            return fail("negative orbits of f are missing from the certificate");
        }

        // Classes of each block must partition the inner orbits it draws on.
        for (const auto& blk : cert.blocks) {
            const PermutationGroup stab = stabilizer(cert.group, blk.beta);
            std::vector<BigInt> covered(cert.inner.size(), 0);
            std::set<ExponentVector> seen;
            for (const auto& cls : blk.classes) {
                if (cls.inner >= cert.inner.size()) {
                    return fail("class refers to a missing inner orbit");
                }
                const InnerOrbit& io = cert.inner[cls.inner];
                if (canonical_representative(cert.group, cls.representative) !=
                    canonical_representative(cert.group, io.representative)) {
                    return fail("class " + cls.representative.to_string() + " lies outside its inner orbit");
                }
                if (!seen.insert(canonical_representative(stab, cls.representative)).second) {
                    return fail("class " + cls.representative.to_string() + " repeated");
                }
                if (orbit_size(stab, cls.representative) != cls.size) {
                    return fail("wrong class size for " + cls.representative.to_string());
                }
                covered[cls.inner] += cls.size;
            }
            for (std::size_t i = 0; i < cert.inner.size(); ++i) {
                if (covered[i] != 0 && covered[i] != cert.inner[i].orbit_size) {
                    return fail("classes do not cover inner orbit " + cert.inner[i].representative.to_string());
                }
            }
            if (cert.support.is_box() &&
                (blk.w_pos.size() != blk.coordinate_blocks.size() || blk.w_neg.size() != blk.coordinate_blocks.size())) {
                return fail("box auxiliaries missing");
            }
            if (blk.coordinate_blocks != coordinate_orbits(stab)) {
                return fail("coordinate blocks differ from the orbits of Stab(beta)");
            }
        }
        out.violation = static_cast<double>(coef_err);
        out.passed = out.violation <= tol;
        return out;
    }

    VerificationCheck nonnegativity() const
    {
        double worst = 0.0;
        for (const auto& blk : cert.blocks) {
            for (const auto& cls : blk.classes) {
                worst = std::max({worst, -cls.c, -cls.nu});
            }
            for (double w : blk.w_pos) {
                worst = std::max(worst, -w);
            }
            for (double w : blk.w_neg) {
                worst = std::max(worst, -w);
            }
        }
        return {"nonnegativity", worst, worst <= kFloorThreshold, ""};
    }

    /// Projection of sum nu (alpha - beta) onto each coordinate orbit of Stab(beta).
    VerificationCheck balance() const
    {
        double worst = 0.0;
        for (const auto& blk : cert.blocks) {
            for (std::size_t q = 0; q < blk.coordinate_blocks.size(); ++q) {
                const auto& coords = blk.coordinate_blocks[q];
                CompensatedSum row;
                for (const auto& cls : blk.classes) {
                    long double s = 0.0L;
                    for (int i : coords) {
                        s += cls.representative[i].to_long_double() - blk.beta[i].to_long_double();
                    }
                    row.add(s * static_cast<long double>(count_to_double(cls.size, true)) * cls.nu);
                }
                if (q < blk.w_pos.size()) {
                    row.add(blk.w_pos[q]);
                    row.add(-static_cast<long double>(blk.w_neg[q]));
                }
                worst = std::max(worst, relative(std::fabs(row.value()), row.magnitude()));
            }
        }
        return {"balance", worst, worst <= tol, ""};
    }

    long double block_coefficient(const CertificateBlock& blk) const
    {
        if (blk.is_origin) {
            return origin_block_coefficient(cert, g.coefficient(blk.beta));
        }
        return g.coefficient(blk.beta);
    }

    VerificationCheck entropy() const
    {
        double worst = 0.0;
        std::string detail;
        for (std::size_t b = 0; b < cert.blocks.size(); ++b) {
            const auto& blk = cert.blocks[b];
            CompensatedSum lhs;
            for (const auto& cls : blk.classes) {
                lhs.add(static_cast<long double>(count_to_double(cls.size, true)) * entropy_term(cls.nu, cls.c));
            }
            for (std::size_t q = 0; q < blk.w_pos.size(); ++q) {
                long double su = 0.0L;
                long double sl = 0.0L;
                for (int i : blk.coordinate_blocks[q]) {
                    su += cert.support.upper.at(i);
                    sl += cert.support.lower.at(i);
                }
                const auto len = static_cast<long double>(blk.coordinate_blocks[q].size());
                lhs.add(su / len * blk.w_pos[q]);
                lhs.add(-sl / len * blk.w_neg[q]);
            }
            const long double rhs = block_coefficient(blk);
            const double v =
                relative(std::max(0.0L, lhs.value() - rhs), std::max(lhs.magnitude(), std::fabs(rhs)));
            if (v > worst) {
                worst = v;
                detail = "block " + blk.beta.to_string();
            }
        }
        return {"entropy", worst, worst <= tol, detail};
    }

    VerificationCheck budget_rows() const
    {
        double worst = 0.0;
        std::string detail;
        for (std::size_t i = 0; i < cert.inner.size(); ++i) {
            const InnerOrbit& io = cert.inner[i];
            if (!budgeted(cert, io)) {
                continue;
            }
            CompensatedSum used;
            for (const auto& blk : cert.blocks) {
                for (const auto& cls : blk.classes) {
                    if (cls.inner == i) {
                        used.add(to_ld(budget_weight(blk, cls, io)) * cls.c);
                    }
                }
            }
            const long double target = g.coefficient(io.representative);
            const double v = relative(std::max(0.0L, used.value() - target), std::max(used.magnitude(), std::fabs(target)));
            if (v > worst) {
                worst = v;
                detail = "orbit " + io.representative.to_string();
            }
        }
        return {"budget", worst, worst <= tol, detail};
    }

    /// Expanded summands: each is checked as an AGE signomial in the full
    /// space, and their sum is compared with the target.
    void expanded(std::vector<VerificationCheck>& out) const
    {
        const std::size_t n = cert.dimension;
        std::map<ExponentVector, CompensatedSum> total;
        double age_worst = 0.0;
        std::string age_detail;
        bool structural = true;
        for_each_summand(
            cert,
            [&](const AGESummand& s) {
                std::vector<CompensatedSum> v(n);
                CompensatedSum d;
                for (const auto& t : s.terms) {
                    if (t.c < 0.0 || t.alpha == s.beta) {
                        structural = false;
                    }
                    total[t.alpha].add(t.c);
                    d.add(entropy_term(t.nu, t.c));
                    if (t.nu != 0.0) {
                        for (std::size_t i = 0; i < n; ++i) {
                            v[i].add(t.nu * (t.alpha[i].to_long_double() - s.beta[i].to_long_double()));
                        }
                    }
                }
                total[s.beta].add(s.beta_coefficient);
                long double support = 0.0L;
                long double imbalance = 0.0L;
                long double vmag = 0.0L;
                for (std::size_t i = 0; i < n; ++i) {
                    const long double vi = v[i].value();
                    vmag = std::max(vmag, v[i].magnitude());
                    if (cert.support.is_box()) {
                        support += std::max(-vi * cert.support.upper[i], -vi * cert.support.lower[i]);
                    } else {
                        imbalance = std::max(imbalance, std::fabs(vi));
                    }
                }
                const long double rhs = s.beta_coefficient;
                const double ent = relative(std::max(0.0L, d.value() + support - rhs),
                                            std::max({d.magnitude(), std::fabs(support), std::fabs(rhs)}));
                const double worst = std::max(ent, relative(imbalance, vmag));
                if (worst > age_worst) {
                    age_worst = worst;
                    age_detail = "summand at " + s.beta.to_string();
                }
            },
            budget);

        out.push_back({"age", age_worst, age_worst <= tol && structural,
                       structural ? age_detail : "a summand has a negative coefficient away from beta"});

        // Untouched exponents of g form the remainder, which must be nonnegative.
        double deviation = 0.0;
        std::string dev_detail;
        for (const auto& [alpha, sum] : total) {
            const double dev = static_cast<double>(std::fabs(sum.value() - g.coefficient(alpha)));
            if (dev > deviation) {
                deviation = dev;
                dev_detail = "exponent " + alpha.to_string();
            }
        }
        double negative_rest = 0.0;
        for (const auto& [alpha, c] : g) {
            if (!total.contains(alpha)) {
                negative_rest = std::max(negative_rest, -c);
            }
        }
        out.push_back({"remainder", negative_rest, negative_rest <= tol, ""});
        out.push_back({"reconstruction", deviation, deviation <= tol, dev_detail});
    }
};

}  // namespace

VerificationReport verify_certificate(const Signomial& f, const ReducedCertificate& cert, double tol,
                                      std::size_t budget)
{
    VerificationReport report;
    Verifier v{f, cert, tol, budget};
    try {
        report.checks.push_back(v.structure());
    } catch (const std::exception& e) {
        report.checks.push_back({"structure", 1.0, false, e.what()});
    }
    if (report.checks.back().passed) {
        try {
            v.g = certified_target(f, cert);
            report.checks.push_back(v.nonnegativity());
            report.checks.push_back(v.balance());
            report.checks.push_back(v.entropy());
            report.checks.push_back(v.budget_rows());
            v.expanded(report.checks);
        } catch (const std::exception& e) {
            report.checks.push_back({"evaluation", 1.0, false, e.what()});
        }
    }
    report.passed = std::all_of(report.checks.begin(), report.checks.end(),
                                [](const VerificationCheck& c) { return c.passed; });
    return report;
}

nlohmann::json to_json(const ReducedCertificate& cert)
{
    nlohmann::json doc;
    doc["format"] = "symsage-certificate";
    doc["version"] = ReducedCertificate::kVersion;
    doc["mode"] = to_string(cert.mode);
    doc["objective"] = objective_name(cert.objective);
    doc["origin"] = to_string(cert.origin);
    doc["dimension"] = cert.dimension;
    doc["group"] = cert.group.to_json();
    if (cert.support.is_box()) {
        doc["support"] = {{"kind", "box"}, {"lower", cert.support.lower}, {"upper", cert.support.upper}};
    } else {
        doc["support"] = {{"kind", "free"}};
    }
    doc["lambda"] = cert.lambda ? nlohmann::json(*cert.lambda) : nlohmann::json(nullptr);
    doc["scale"] = cert.scale ? nlohmann::json(*cert.scale) : nlohmann::json(nullptr);
    auto inner = nlohmann::json::array();
    for (const auto& io : cert.inner) {
        inner.push_back({{"representative", exponent_to_json(io.representative)},
                         {"coefficient", io.coefficient},
                         {"orbit_size", to_string(io.orbit_size)},
                         {"is_origin", io.is_origin}});
    }
    doc["inner"] = std::move(inner);
    auto blocks = nlohmann::json::array();
    for (const auto& blk : cert.blocks) {
        auto classes = nlohmann::json::array();
        for (const auto& cls : blk.classes) {
            classes.push_back({{"representative", exponent_to_json(cls.representative)},
                               {"size", to_string(cls.size)},
                               {"inner", cls.inner},
                               {"c", cls.c},
                               {"nu", cls.nu}});
        }
        nlohmann::json b = {{"beta", exponent_to_json(blk.beta)},
                            {"orbit_size", to_string(blk.orbit_size)},
                            {"is_origin", blk.is_origin},
                            {"beta_coefficient", blk.beta_coefficient},
                            {"coordinate_blocks", blk.coordinate_blocks},
                            {"classes", std::move(classes)}};
        if (!blk.w_pos.empty()) {
            b["w_pos"] = blk.w_pos;
            b["w_neg"] = blk.w_neg;
        }
        blocks.push_back(std::move(b));
    }
    doc["blocks"] = std::move(blocks);
    return doc;
}

ReducedCertificate certificate_from_json(const nlohmann::json& doc)
{
    if (doc.value("format", "") != "symsage-certificate") {
        throw std::invalid_argument("not a certificate document");
    }
    if (doc.at("version").get<int>() != ReducedCertificate::kVersion) {
        throw std::invalid_argument("unsupported certificate version " + doc.at("version").dump());
    }
    ReducedCertificate cert;
    const std::string mode = doc.at("mode").get<std::string>();
    if (mode != "standard" && mode != "reduced") {
        throw std::invalid_argument("unknown mode '" + mode + "'");
    }
    cert.mode = mode == "standard" ? ProgramMode::Standard : ProgramMode::Reduced;
    cert.objective = parse_objective(doc.at("objective").get<std::string>());
    const std::string origin = doc.at("origin").get<std::string>();
    if (origin != "inner" && origin != "free") {
        throw std::invalid_argument("unknown origin mode '" + origin + "'");
    }
    cert.origin = origin == "inner" ? OriginMode::Inner : OriginMode::Free;
    cert.dimension = doc.at("dimension").get<std::size_t>();
    cert.group = PermutationGroup::from_json(doc.at("group"));
    const auto& support = doc.at("support");
    if (support.at("kind").get<std::string>() == "box") {
        cert.support = SupportOracle::box(support.at("lower").get<std::vector<double>>(),
                                          support.at("upper").get<std::vector<double>>());
    }
    if (!doc.at("lambda").is_null()) {
        cert.lambda = doc.at("lambda").get<double>();
    }
    if (!doc.at("scale").is_null()) {
        cert.scale = doc.at("scale").get<double>();
    }
    for (const auto& e : doc.at("inner")) {
        InnerOrbit io;
        io.representative = exponent_from_json(e.at("representative"));
        io.coefficient = e.at("coefficient").get<double>();
        io.orbit_size = BigInt(e.at("orbit_size").get<std::string>());
        io.is_origin = e.at("is_origin").get<bool>();
        cert.inner.push_back(std::move(io));
    }
    for (const auto& e : doc.at("blocks")) {
        CertificateBlock blk;
        blk.beta = exponent_from_json(e.at("beta"));
        blk.orbit_size = BigInt(e.at("orbit_size").get<std::string>());
        blk.is_origin = e.at("is_origin").get<bool>();
        blk.beta_coefficient = e.at("beta_coefficient").get<double>();
        blk.coordinate_blocks = e.at("coordinate_blocks").get<std::vector<std::vector<int>>>();
        for (const auto& c : e.at("classes")) {
            CertificateClass cls;
            cls.representative = exponent_from_json(c.at("representative"));
            cls.size = BigInt(c.at("size").get<std::string>());
            cls.inner = c.at("inner").get<std::size_t>();
            cls.c = c.at("c").get<double>();
            cls.nu = c.at("nu").get<double>();
            blk.classes.push_back(std::move(cls));
        }
        if (e.contains("w_pos")) {
            blk.w_pos = e.at("w_pos").get<std::vector<double>>();
            blk.w_neg = e.at("w_neg").get<std::vector<double>>();
        }
        cert.blocks.push_back(std::move(blk));
    }
    return cert;
}

nlohmann::json to_json(const VerificationReport& report)
{
    auto checks = nlohmann::json::array();
    for (const auto& c : report.checks) {
        checks.push_back({{"name", c.name}, {"violation", c.violation}, {"passed", c.passed}, {"detail", c.detail}});
    }
    return {{"passed", report.passed}, {"checks", std::move(checks)}};
}

}  // namespace symsage
