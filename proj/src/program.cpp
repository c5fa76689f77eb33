#include "symsage/program.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace symsage {

SupportOracle SupportOracle::box(std::vector<double> lower, std::vector<double> upper)
{
    if (lower.size() != upper.size() || lower.empty()) {
        throw std::invalid_argument("box bounds must be nonempty and of equal length");
    }
    for (std::size_t i = 0; i < lower.size(); ++i) {
        if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || lower[i] > upper[i]) {
            throw std::invalid_argument("box bound " + std::to_string(i) + " is not a finite interval");
        }
    }
    SupportOracle k;
    k.kind = Kind::Box;
    k.lower = std::move(lower);
    k.upper = std::move(upper);
    return k;
}

double support_value(const SupportOracle& k, std::span<const double> v)
{
    if (!k.is_box()) {
        const bool zero = std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
        return zero ? 0.0 : std::numeric_limits<double>::infinity();
    }
    if (v.size() != k.lower.size()) {
        throw std::invalid_argument("support direction has the wrong length");
    }
    long double acc = 0.0L;
    for (std::size_t i = 0; i < v.size(); ++i) {
        acc += static_cast<long double>(v[i]) * (v[i] > 0 ? k.upper[i] : k.lower[i]);
    }
    return static_cast<double>(acc);
}

std::string to_string(OriginMode mode)
{
    return mode == OriginMode::Inner ? "inner" : "free";
}

double ProgramResiduals::max() const
{
    return std::max({equality, inequality, nonnegativity, entropy});
}

namespace {

BigRational to_big(const Rational& r)
{
    return BigRational(BigInt(r.num()), BigInt(r.den()));
}

struct Prepared {
    PermutationGroup group = PermutationGroup::trivial(1);
    std::map<ExponentVector, double> coefficient;
    std::vector<OrbitClass> inner;
    std::vector<OrbitClass> outer;
    SizePrediction predicted;
};

void check_box_invariant(const SupportOracle& k, const PermutationGroup& group)
{
    for (const auto& orb : coordinate_orbits(group)) {
        for (int i : orb) {
            if (k.lower[i] != k.lower[orb.front()] || k.upper[i] != k.upper[orb.front()]) {
                throw std::invalid_argument("box constraint set is not invariant under the group");
            }
        }
    }
}

Prepared prepare(const Signomial& f, const PermutationGroup& input_group, ProgramMode mode,
                 Objective objective, const BuildOptions& opt)
{
    const std::size_t n = f.dimension();
    if (input_group.degree() != n) {
        throw std::invalid_argument("group degree " + std::to_string(input_group.degree()) +
                                    " does not match dimension " + std::to_string(n));
    }
    if (opt.support.is_box() && opt.support.lower.size() != n) {
        throw std::invalid_argument("box dimension does not match the signomial");
    }
    if (opt.origin == OriginMode::Free && objective != Objective::MaximizeLambda) {
        throw std::invalid_argument("the free origin block applies to bound programs only");
    }

    Prepared out;
    out.group = mode == ProgramMode::Standard ? PermutationGroup::trivial(n) : input_group;
    if (mode == ProgramMode::Reduced) {
        if (!check_invariance(f, input_group, opt.invariance_tol)) {
            throw std::invalid_argument("signomial is not invariant under " + input_group.describe());
        }
        if (opt.support.is_box()) {
            check_box_invariant(opt.support, input_group);
        }
    }

    const ExponentVector origin = zero_exponent(n);
    std::vector<ExponentVector> inner;
    std::vector<ExponentVector> outer;
    for (const auto& [alpha, c] : f) {
        out.coefficient[alpha] = c;
        if (objective == Objective::MaximizeLambda && alpha == origin) {
            continue;
        }
        (c > 0 ? inner : outer).push_back(alpha);
    }
    if (objective == Objective::MaximizeLambda) {
        // f - lambda: the constant term always sits with the positive terms.
        inner.push_back(origin);
        out.coefficient[origin] = f.coefficient(origin);
    }
    out.inner = orbit_representatives(out.group, inner);
    out.outer = orbit_representatives(out.group, outer);
    for (auto* classes : {&out.inner, &out.outer}) {
        for (auto& cls : *classes) {
            cls.elements.clear();
            cls.elements.shrink_to_fit();
        }
    }
    SizeOptions so;
    so.box = opt.support.is_box();
    so.origin_block = opt.origin == OriginMode::Free;
    out.predicted = predict_sizes(out.inner, out.outer, out.group, mode, objective != Objective::Feasibility, so);
    return out;
}

std::string block_label(const std::vector<int>& coords)
{
    std::string s = "{";
    for (std::size_t i = 0; i < coords.size(); ++i) {
        s += (i ? "," : "") + std::to_string(coords[i] + 1);
    }
    return s + "}";
}

ConicProgram build(const Signomial& f, const PermutationGroup& input_group, ProgramMode mode,
                   Objective objective, const BuildOptions& opt)
{
    Prepared prep = prepare(f, input_group, mode, objective, opt);
    if (prep.predicted.variables > opt.max_variables) {
        throw std::length_error("program would have " + to_string(prep.predicted.variables) +
                                " variables, above the limit of " + std::to_string(opt.max_variables));
    }
    const bool exact = !opt.allow_inexact_counts;
    const PermutationGroup& group = prep.group;
    const std::size_t n = f.dimension();
    const bool box = opt.support.is_box();
    const bool free_origin = opt.origin == OriginMode::Free;

    ConicProgram p;
    p.meta.mode = mode;
    p.meta.objective = objective;
    p.meta.origin = opt.origin;
    p.meta.group = group;
    p.meta.dimension = n;
    p.meta.support = opt.support;

    const auto add_var = [&](std::string name, bool nonneg, VarKind kind, int block, int cls) {
        p.variables.push_back({std::move(name), nonneg, kind, block, cls});
        p.objective.push_back(0.0);
        return p.variables.size() - 1;
    };
    if (objective == Objective::MaximizeLambda) {
        p.meta.lambda_var = add_var("lambda", false, VarKind::Lambda, -1, -1);
        p.objective[*p.meta.lambda_var] = 1.0;
    } else if (objective == Objective::MaximizeScale) {
        p.meta.scale_var = add_var("delta", false, VarKind::Scale, -1, -1);
        p.objective[*p.meta.scale_var] = 1.0;
    }

    std::optional<std::size_t> origin_inner;
    for (const auto& cls : prep.inner) {
        InnerOrbit io;
        io.representative = cls.representative;
        io.coefficient = prep.coefficient.at(cls.representative);
        io.orbit_size = cls.size;
        io.is_origin = cls.representative.is_zero();
        if (io.is_origin) {
            origin_inner = p.meta.inner.size();
        }
        p.meta.inner.push_back(std::move(io));
    }

    std::vector<BlockInfo> seeds;
    for (const auto& cls : prep.outer) {
        BlockInfo info;
        info.beta = cls.representative;
        info.coefficient = prep.coefficient.at(cls.representative);
        info.orbit_size = cls.size;
        seeds.push_back(std::move(info));
    }
    if (free_origin) {
        BlockInfo info;
        info.beta = zero_exponent(n);
        info.coefficient = p.meta.inner[*origin_inner].coefficient;
        info.orbit_size = 1;
        info.is_origin = true;
        seeds.push_back(std::move(info));
    }

    for (std::size_t b = 0; b < seeds.size(); ++b) {
        BlockInfo info = std::move(seeds[b]);
        const PermutationGroup stab = stabilizer(group, info.beta);
        info.coordinate_blocks = coordinate_orbits(stab);
        const std::string beta_str = info.beta.to_string();
        for (std::size_t i = 0; i < p.meta.inner.size(); ++i) {
            if (info.is_origin && p.meta.inner[i].is_origin) {
                continue;
            }
            for (auto& sub : orbit_suborbits(group, p.meta.inner[i].representative, stab)) {
                sub.elements.clear();
                const int k = static_cast<int>(info.classes.size());
                const std::string gamma = sub.representative.to_string();
                info.nu_vars.push_back(add_var("nu[" + beta_str + "][" + gamma + "]", true, VarKind::Nu,
                                               static_cast<int>(b), k));
                info.c_vars.push_back(add_var("c[" + beta_str + "][" + gamma + "]", true, VarKind::C,
                                              static_cast<int>(b), k));
                info.classes.push_back(std::move(sub));
                info.class_inner.push_back(i);
            }
        }

        RelEntropyBlock blk;
        blk.block = b;
        for (std::size_t k = 0; k < info.classes.size(); ++k) {
            blk.terms.push_back({info.nu_vars[k], info.c_vars[k], count_to_double(info.classes[k].size, !exact)});
        }

        // Projection of sum nu (alpha - beta) onto each coordinate orbit of Stab(beta).
        for (std::size_t q = 0; q < info.coordinate_blocks.size(); ++q) {
            const auto& coords = info.coordinate_blocks[q];
            LinearRow row;
            row.label = "balance[" + beta_str + "]" + block_label(coords);
            const Rational beta_part = info.beta[coords.front()] * Rational(static_cast<std::int64_t>(coords.size()));
            for (std::size_t k = 0; k < info.classes.size(); ++k) {
                Rational s;
                for (int i : coords) {
                    s += info.classes[k].representative[i];
                }
                s -= beta_part;
                if (s.is_zero()) {
                    continue;
                }
                const BigRational coef = to_big(s) * BigRational(info.classes[k].size);
                row.terms.push_back({info.nu_vars[k], ratio_to_double(coef, !exact)});
            }
            if (box) {
                const int qi = static_cast<int>(q);
                const auto pos = add_var("w+[" + beta_str + "]" + block_label(coords), true, VarKind::SupportPos,
                                         static_cast<int>(b), qi);
                const auto neg = add_var("w-[" + beta_str + "]" + block_label(coords), true, VarKind::SupportNeg,
                                         static_cast<int>(b), qi);
                info.support_pos.push_back(pos);
                info.support_neg.push_back(neg);
                row.terms.push_back({pos, 1.0});
                row.terms.push_back({neg, -1.0});
                // The balance vector is constant on the orbit, so the support
                // term splits evenly over its coordinates.
                long double su = 0.0L;
                long double sl = 0.0L;
                for (int i : coords) {
                    su += opt.support.upper[i];
                    sl += opt.support.lower[i];
                }
                const auto len = static_cast<long double>(coords.size());
                blk.lhs_linear.push_back({pos, static_cast<double>(su / len)});
                blk.lhs_linear.push_back({neg, static_cast<double>(-sl / len)});
            }
            p.equalities.push_back(std::move(row));
        }

        if (info.is_origin) {
            blk.lhs_linear.push_back({*p.meta.lambda_var, 1.0});
            blk.rhs = info.coefficient;
        } else if (objective == Objective::MaximizeScale) {
            blk.lhs_linear.push_back({*p.meta.scale_var, -info.coefficient});
            blk.rhs = 0.0;
        } else {
            blk.rhs = info.coefficient;
        }
        p.blocks.push_back(std::move(blk));
        p.meta.blocks.push_back(std::move(info));
    }

    // Coefficient budget of each inner orbit; c^(beta)_gamma enters with weight
    // |G beta| |class| / |G alpha|.
    std::vector<LinearRow> budget(p.meta.inner.size());
    for (std::size_t i = 0; i < p.meta.inner.size(); ++i) {
        budget[i].rhs = p.meta.inner[i].coefficient;
        budget[i].label = "budget[" + p.meta.inner[i].representative.to_string() + "]";
        if (p.meta.inner[i].is_origin && p.meta.lambda_var) {
            budget[i].terms.push_back({*p.meta.lambda_var, 1.0});
        }
    }
    for (const auto& info : p.meta.blocks) {
        for (std::size_t k = 0; k < info.classes.size(); ++k) {
            const std::size_t i = info.class_inner[k];
            const BigRational w = BigRational(info.orbit_size * info.classes[k].size) /
                                  BigRational(p.meta.inner[i].orbit_size);
            budget[i].terms.push_back({info.c_vars[k], ratio_to_double(w, !exact)});
        }
    }
    for (std::size_t i = 0; i < budget.size(); ++i) {
        if (free_origin && p.meta.inner[i].is_origin) {
            // The origin's budget is the origin block's right-hand side.
            auto& blk = p.blocks.back();
            for (const auto& t : budget[i].terms) {
                if (t.var != *p.meta.lambda_var) {
                    blk.lhs_linear.push_back(t);
                }
            }
            continue;
        }
        p.inequalities.push_back(std::move(budget[i]));
    }

    const auto& pr = prep.predicted;
    if (pr.variables != p.num_variables() || pr.equalities != p.num_equalities() ||
        pr.inequalities != p.num_inequalities()) {
        throw std::logic_error("built program size (" + std::to_string(p.num_variables()) + ", " +
                               std::to_string(p.num_equalities()) + ", " + std::to_string(p.num_inequalities()) +
                               ") differs from the prediction (" + to_string(pr.variables) + ", " +
                               to_string(pr.equalities) + ", " + to_string(pr.inequalities) + ")");
    }
    return p;
}

double row_scale(const std::vector<LinearTerm>& terms)
{
    double s = 0.0;
    for (const auto& t : terms) {
        s = std::max(s, std::abs(t.coef));
    }
    return s > 0.0 ? s : 1.0;
}

double block_scale(const RelEntropyBlock& blk)
{
    double s = row_scale(blk.lhs_linear);
    if (blk.lhs_linear.empty()) {
        s = 0.0;
    }
    for (const auto& t : blk.terms) {
        s = std::max(s, std::abs(t.weight));
    }
    return s > 0.0 ? s : 1.0;
}

long double row_value(const std::vector<LinearTerm>& terms, std::span<const double> x)
{
    long double acc = 0.0L;
    for (const auto& t : terms) {
        acc += static_cast<long double>(t.coef) * x[t.var];
    }
    return acc;
}


/// A block whose right-hand side is a fixed negative number needs some
/// nonzero nu on its balance rows. When the exponents cannot balance at all
/// (the outer exponent lies outside the hull of the inner ones) the entropy
/// constraint is only violated in the limit and the conic certificate is not
/// attained, so the check is done on the linear part by itself.
std::optional<std::size_t> unbalanced_block(const ConicProgram& p, const SolverConfig& config)
{
    for (std::size_t b = 0; b < p.blocks.size(); ++b) {
        const RelEntropyBlock& blk = p.blocks[b];
        if (!blk.lhs_linear.empty() || !(blk.rhs < 0.0) || blk.terms.empty()) {
            continue;
        }
        std::map<std::size_t, std::size_t> local;
        for (const auto& t : blk.terms) {
            local.emplace(t.nu, local.size());
        }
        CanonicalProgram lp;
        lp.num_vars = local.size();
        lp.c.assign(lp.num_vars, 0.0);
        bool foreign = false;
        for (const LinearRow& row : p.equalities) {
            bool mine = false;
            bool other = false;
            for (const auto& t : row.terms) {
                (local.count(t.var) ? mine : other) = true;
            }
            if (!mine) {
                continue;
            }
            if (other || row.rhs != 0.0) {
                foreign = true;
                break;
            }
            for (const auto& t : row.terms) {
                lp.A.push_back({lp.num_eq, local.at(t.var), t.coef});
            }
            lp.b.push_back(0.0);
            ++lp.num_eq;
        }
        if (foreign) {
            continue;
        }
        for (std::size_t j = 0; j < lp.num_vars; ++j) {
            lp.A.push_back({lp.num_eq, j, 1.0});
            lp.G.push_back({j, j, -1.0});
        }
        lp.b.push_back(1.0);
        ++lp.num_eq;
        lp.num_linear = lp.num_vars;
        lp.h.assign(lp.num_vars, 0.0);
        SolverConfig quiet = config;
        quiet.verbosity = 0;
        if (solve(lp, quiet).status == SolveStatus::Infeasible) {
            return b;
        }
    }
    return std::nullopt;
}

}  // namespace

ConicProgram build_membership_standard(const Signomial& f, const BuildOptions& options)
{
    return build(f, PermutationGroup::trivial(f.dimension()), ProgramMode::Standard, Objective::Feasibility, options);
}

ConicProgram build_membership_reduced(const Signomial& f, const PermutationGroup& group, const BuildOptions& options)
{
    return build(f, group, ProgramMode::Reduced, Objective::Feasibility, options);
}

ConicProgram build_bound_program(const Signomial& f, const PermutationGroup& group, ProgramMode mode,
                                 const BuildOptions& options)
{
    return build(f, group, mode, Objective::MaximizeLambda, options);
}

ConicProgram build_scale_program(const Signomial& f, const PermutationGroup& group, ProgramMode mode,
                                 const BuildOptions& options)
{
    return build(f, group, mode, Objective::MaximizeScale, options);
}

SizePrediction predict_program_sizes(const Signomial& f, const PermutationGroup& group, ProgramMode mode,
                                     Objective objective, const BuildOptions& options)
{
    return prepare(f, group, mode, objective, options).predicted;
}

CanonicalForm canonicalize(const ConicProgram& p)
{
    const std::size_t nv = p.num_variables();
    std::size_t num_terms = 0;
    for (const auto& blk : p.blocks) {
        num_terms += blk.terms.size();
    }

    CanonicalForm out;
    out.num_program_vars = nv;
    out.objective_sign = -1.0;
    CanonicalProgram& cp = out.program;
    cp.num_vars = nv + num_terms;
    cp.var_names.reserve(cp.num_vars);
    cp.c.assign(cp.num_vars, 0.0);
    for (std::size_t j = 0; j < nv; ++j) {
        cp.var_names.push_back(p.variables[j].name);
        cp.c[j] = -p.objective[j];
    }
    for (std::size_t k = 0; k < num_terms; ++k) {
        cp.var_names.push_back("t[" + std::to_string(k) + "]");
    }

    for (const auto& row : p.equalities) {
        const double s = row_scale(row.terms);
        for (const auto& t : row.terms) {
            cp.A.push_back({cp.num_eq, t.var, t.coef / s});
        }
        cp.b.push_back(row.rhs / s);
        ++cp.num_eq;
    }

    std::size_t r = 0;
    for (const auto& row : p.inequalities) {
        const double s = row_scale(row.terms);
        for (const auto& t : row.terms) {
            cp.G.push_back({r, t.var, t.coef / s});
        }
        cp.h.push_back(row.rhs / s);
        ++r;
    }
    std::vector<char> in_cone(nv, 0);
    out.slack_row.assign(nv, -1);
    std::size_t tvar = nv;
    for (const auto& blk : p.blocks) {
        const double s = block_scale(blk);
        for (const auto& t : blk.terms) {
            cp.G.push_back({r, tvar++, t.weight / s});
            in_cone[t.nu] = in_cone[t.c] = 1;
        }
        for (const auto& t : blk.lhs_linear) {
            cp.G.push_back({r, t.var, t.coef / s});
        }
        cp.h.push_back(blk.rhs / s);
        ++r;
    }
    for (std::size_t j = 0; j < nv; ++j) {
        if (p.variables[j].nonnegative && !in_cone[j]) {
            cp.G.push_back({r, j, -1.0});
            cp.h.push_back(0.0);
            out.slack_row[j] = static_cast<std::ptrdiff_t>(r);
            ++r;
        }
    }
    cp.num_linear = r;

    // (-t - nu, nu, c) in K_exp  <=>  t >= nu ln(nu / (e c)).
    tvar = nv;
    for (const auto& blk : p.blocks) {
        for (const auto& t : blk.terms) {
            cp.G.push_back({r, tvar, 1.0});
            cp.G.push_back({r, t.nu, 1.0});
            cp.G.push_back({r + 1, t.nu, -1.0});
            cp.G.push_back({r + 2, t.c, -1.0});
            cp.h.insert(cp.h.end(), {0.0, 0.0, 0.0});
            out.slack_row[t.nu] = static_cast<std::ptrdiff_t>(r + 1);
            out.slack_row[t.c] = static_cast<std::ptrdiff_t>(r + 2);
            r += 3;
            ++tvar;
            ++cp.num_exp;
        }
    }
    cp.validate();
    return out;
}

ProgramResiduals residuals(const ConicProgram& p, std::span<const double> x)
{
    if (x.size() != p.num_variables()) {
        throw std::invalid_argument("point has " + std::to_string(x.size()) + " entries, program has " +
                                    std::to_string(p.num_variables()) + " variables");
    }
    ProgramResiduals res;
    for (const auto& row : p.equalities) {
        const long double v = row_value(row.terms, x) - row.rhs;
        res.equality = std::max(res.equality, static_cast<double>(std::abs(v) / row_scale(row.terms)));
    }
    for (const auto& row : p.inequalities) {
        const long double v = row_value(row.terms, x) - row.rhs;
        res.inequality = std::max(res.inequality, static_cast<double>(std::max(0.0L, v) / row_scale(row.terms)));
    }
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (p.variables[j].nonnegative) {
            res.nonnegativity = std::max(res.nonnegativity, -x[j]);
        }
    }
    for (const auto& blk : p.blocks) {
        long double v = row_value(blk.lhs_linear, x) - blk.rhs;
        for (const auto& t : blk.terms) {
            const long double nu = x[t.nu];
            const long double c = x[t.c];
            if (nu <= 0.0L) {
                continue;
            }
            if (c <= 0.0L) {
                v = std::numeric_limits<long double>::infinity();
                break;
            }
            v += static_cast<long double>(t.weight) * nu * (std::log(nu / c) - 1.0L);
        }
        res.entropy = std::max(res.entropy, static_cast<double>(std::max(0.0L, v) / block_scale(blk)));
    }
    return res;
}

ProgramSolution solve_program(const ConicProgram& p, const SolverConfig& config)
{
    ProgramSolution out;
    if (const auto b = unbalanced_block(p, config)) {
        out.result.status = SolveStatus::Infeasible;
        out.result.message = "block " + std::to_string(*b) + ": no nonnegative combination balances the exponents";
        return out;
    }
    const CanonicalForm form = canonicalize(p);
    out.result = solve(form.program, config);
    if (out.result.x.size() >= form.num_program_vars) {
        out.values.assign(out.result.x.begin(), out.result.x.begin() + static_cast<std::ptrdiff_t>(form.num_program_vars));
    }
    // Sign-constrained values come from the slacks, which the interior-point
    // iterates keep strictly inside the cone; x alone can be off by the
    // primal residual and slightly negative.
    if (out.result.status == SolveStatus::Optimal && !out.result.s.empty()) {
        for (std::size_t j = 0; j < out.values.size(); ++j) {
            if (form.slack_row[j] >= 0) {
                out.values[j] = out.result.s[static_cast<std::size_t>(form.slack_row[j])];
            }
        }
    }
    long double obj = 0.0L;
    for (std::size_t j = 0; j < out.values.size(); ++j) {
        obj += static_cast<long double>(p.objective[j]) * out.values[j];
    }
    out.objective = static_cast<double>(obj);
    return out;
}

nlohmann::json export_program(const ConicProgram& p)
{
    const CanonicalForm form = canonicalize(p);
    nlohmann::json doc = to_json(form.program);
    doc["program"] = {
        {"mode", to_string(p.meta.mode)},
        {"origin", to_string(p.meta.origin)},
        {"group", p.meta.group.to_json()},
        {"dimension", p.meta.dimension},
        {"sense", "minimize the negated program objective"},
        {"program_variables", form.num_program_vars},
        {"sizes",
         {{"variables", p.num_variables()},
          {"equalities", p.num_equalities()},
          {"inequalities", p.num_inequalities()}}},
    };
    return doc;
}

}  // namespace symsage
