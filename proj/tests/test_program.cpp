#include <doctest.h>

#include "oracles.hpp"
#include "symsage/program.hpp"

#include <cmath>
#include <map>
#include <random>

using namespace symsage;

namespace {

// Support of the eight-point S_3 example: 0, orbit of 7e_1 positive; orbit of
// (1,1,2) and (2,2,2) negative.
Signomial eight_point(double c0, double c1, double c4, double c7)
{
    Signomial f(3);
    f.add_term({0, 0, 0}, c0);
    f.add_term({7, 0, 0}, c1);
    f.add_term({0, 7, 0}, c1);
    f.add_term({0, 0, 7}, c1);
    f.add_term({1, 1, 2}, c4);
    f.add_term({1, 2, 1}, c4);
    f.add_term({2, 1, 1}, c4);
    f.add_term({2, 2, 2}, c7);
    return f;
}

Signomial scale_example()
{
    Signomial f(3);
    f.add_term({6, 0, 0}, 1.0);
    f.add_term({0, 6, 0}, 1.0);
    f.add_term({0, 0, 6}, 1.0);
    f.add_term({1, 1, 1}, 1.0);
    f.add_term({1, 2, 2}, -1.0);
    f.add_term({2, 1, 2}, -1.0);
    f.add_term({2, 2, 1}, -1.0);
    return f;
}

// Largest delta with a e^<a0> + b e^<a1> + c e^<a2> + c e^<a3> - delta e^<beta>
// nonnegative, a = 1/3 and b + 2c = 1, from the circuit number
// prod (c_i / lambda_i)^lambda_i with barycentric weights lambda of beta.
double scale_example_oracle()
{
    // (1,2,2) = l0 (1,1,1) + l1 (6,0,0) + l2 (0,6,0) + l3 (0,0,6).
    const double l0 = 1.0 / 3.0;
    const double l1 = (1.0 - l0) / 6.0;
    const double l2 = (2.0 - l0) / 6.0;
    const auto theta = [&](double b) {
        const double c = (1.0 - b) / 2.0;
        return std::pow((1.0 / 3.0) / l0, l0) * std::pow(b / l1, l1) * std::pow(c / l2, 2.0 * l2);
    };
    double lo = 1e-9;
    double hi = 1.0 - 1e-9;
    for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        (theta(m1) < theta(m2) ? lo : hi) = (theta(m1) < theta(m2) ? m1 : m2);
    }
    return theta(0.5 * (lo + hi));
}

// Infimum of a bivariate signomial by grid search plus shrinking pattern search.
double grid_infimum(const Signomial& f, double lo, double hi)
{
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> x(2);
    std::vector<double> arg(2);
    const int steps = 400;
    for (int i = 0; i <= steps; ++i) {
        for (int j = 0; j <= steps; ++j) {
            x = {lo + (hi - lo) * i / steps, lo + (hi - lo) * j / steps};
            const double v = f.evaluate(x);
            if (v < best) {
                best = v;
                arg = x;
            }
        }
    }
    for (double h = (hi - lo) / steps; h > 1e-12; h *= 0.5) {
        bool moved = true;
        while (moved) {
            moved = false;
            for (const auto& d : {std::pair{1, 0}, std::pair{-1, 0}, std::pair{0, 1}, std::pair{0, -1}}) {
                x = {arg[0] + h * d.first, arg[1] + h * d.second};
                const double v = f.evaluate(x);
                if (v < best) {
                    best = v;
                    arg = x;
                    moved = true;
                }
            }
        }
    }
    return best;
}

Signomial f1(std::size_t n)
{
    Signomial f(n);
    std::vector<int> alpha(n);
    std::iota(alpha.begin(), alpha.end(), 1);
    do {
        std::vector<Rational> e(alpha.begin(), alpha.end());
        f.add_term(ExponentVector(e), static_cast<double>(n));
    } while (std::next_permutation(alpha.begin(), alpha.end()));
    f.add_term(ExponentVector(std::vector<Rational>(n, Rational(1))), -static_cast<double>(n));
    return f;
}

double term_coef(const LinearRow& row, std::size_t var)
{
    double s = 0.0;
    for (const auto& t : row.terms) {
        if (t.var == var) {
            s += t.coef;
        }
    }
    return s;
}

}  // namespace

TEST_CASE("eight-point example: reduced and standard sizes")
{
    const Signomial f = eight_point(1.0, 1.0, -0.1, -0.1);
    const auto s3 = PermutationGroup::symmetric(3);
    const ConicProgram reduced = build_membership_reduced(f, s3);
    CHECK(reduced.num_variables() == 10);
    CHECK(reduced.num_constraints() == 7);
    CHECK(reduced.num_equalities() == 3);
    CHECK(reduced.blocks.size() == 2);
    const ConicProgram standard = build_membership_standard(f);
    CHECK(standard.num_variables() == 32);
    CHECK(standard.num_constraints() == 20);
}

TEST_CASE("eight-point example: reduced rows match an explicit expansion")
{
    const Signomial f = eight_point(1.0, 1.0, -0.1, -0.1);
    const auto s3 = PermutationGroup::symmetric(3);
    const ConicProgram p = build_membership_reduced(f, s3);
    const auto elements = oracle::all_permutations(3);

    std::size_t eq_row = 0;
    for (const auto& info : p.meta.blocks) {
        const auto stab = oracle::stabilizer_elements(elements, info.beta);
        for (const auto& coords : info.coordinate_blocks) {
            const LinearRow& row = p.equalities.at(eq_row++);
            for (std::size_t k = 0; k < info.classes.size(); ++k) {
                // Class of the representative under Stab(beta), listed explicitly.
                std::set<ExponentVector> cls;
                for (const auto& s : stab) {
                    cls.insert(act(s, info.classes[k].representative));
                }
                CHECK(cls.size() == static_cast<std::size_t>(info.classes[k].size));
                double expected = 0.0;
                for (const auto& a : cls) {
                    for (int i : coords) {
                        expected += (a[i] - info.beta[i]).to_double();
                    }
                }
                CHECK(term_coef(row, info.nu_vars[k]) == doctest::Approx(expected));
            }
        }
    }

    // Budget rows: c_gamma^(beta) summed over all of G beta and the class,
    // divided by the orbit of the inner term it lands in.
    REQUIRE(p.inequalities.size() == 2);
    std::multiset<double> origin_row;
    std::multiset<double> axis_row;
    for (const auto& row : p.inequalities) {
        std::multiset<double> coefs;
        for (const auto& t : row.terms) {
            coefs.insert(t.coef);
        }
        (row.label == "budget[(0,0,0)]" ? origin_row : axis_row) = coefs;
    }
    CHECK(origin_row == std::multiset<double>{1.0, 3.0});
    CHECK(axis_row == std::multiset<double>{1.0, 1.0, 2.0});
}

TEST_CASE("scale program recovers the cube-root optimum")
{
    const Signomial f = scale_example();
    const auto s3 = PermutationGroup::symmetric(3);
    const double oracle_delta = scale_example_oracle();
    CHECK(oracle_delta == doctest::Approx(std::cbrt(9.0 / 4.0)).epsilon(1e-9));

    for (auto mode : {ProgramMode::Reduced, ProgramMode::Standard}) {
        CAPTURE(to_string(mode));
        const ConicProgram p = build_scale_program(f, s3, mode);
        const ProgramSolution sol = solve_program(p);
        REQUIRE(sol.result.status == SolveStatus::Optimal);
        CHECK(std::abs(sol.objective - oracle_delta) < 1e-6);
        CHECK(residuals(p, sol.values).max() < 1e-7);
    }

    // The optimal reduced certificate: a = 1/3, b = 1/6, c = d = 5/12.
    const ConicProgram p = build_scale_program(f, s3, ProgramMode::Reduced);
    const ProgramSolution sol = solve_program(p);
    REQUIRE(p.meta.blocks.size() == 1);
    const auto& info = p.meta.blocks.front();
    std::map<ExponentVector, double> c_by_class;
    for (std::size_t k = 0; k < info.classes.size(); ++k) {
        c_by_class[info.classes[k].representative] = sol.values[info.c_vars[k]];
    }
    // Representative (2,2,1): the lone class among the axis exponents is e_3.
    CHECK(c_by_class.at(ExponentVector{1, 1, 1}) == doctest::Approx(1.0 / 3.0).epsilon(1e-5));
    CHECK(c_by_class.at(ExponentVector{0, 0, 6}) == doctest::Approx(1.0 / 6.0).epsilon(1e-5));
    CHECK(c_by_class.at(ExponentVector{6, 0, 0}) == doctest::Approx(5.0 / 12.0).epsilon(1e-5));
}

TEST_CASE("bound program: sizes and value for the smallest first family member")
{
    const Signomial f = f1(2);
    const auto s2 = PermutationGroup::symmetric(2);
    const ConicProgram reduced = build_bound_program(f, s2, ProgramMode::Reduced);
    CHECK(reduced.num_variables() == 5);
    CHECK(reduced.num_constraints() == 4);
    const ConicProgram standard = build_bound_program(f, s2, ProgramMode::Standard);
    CHECK(standard.num_variables() == 7);
    CHECK(standard.num_constraints() == 6);

    // One negative term, so the bound is the infimum itself: -2/27.
    const double inf = grid_infimum(f, -8.0, 2.0);
    CHECK(inf == doctest::Approx(-2.0 / 27.0).epsilon(1e-8));
    const auto rs = solve_program(reduced);
    const auto ss = solve_program(standard);
    REQUIRE(rs.result.status == SolveStatus::Optimal);
    REQUIRE(ss.result.status == SolveStatus::Optimal);
    CHECK(std::abs(rs.objective - inf) < 1e-6);
    CHECK(std::abs(ss.objective - inf) < 1e-6);
}

TEST_CASE("one-dimensional tight AM/GM membership")
{
    Signomial f(1);
    f.add_term({2}, 1.0);
    f.add_term({0}, 1.0);
    f.add_term({1}, -2.0);
    const auto p = build_membership_standard(f);
    const auto sol = solve_program(p);
    CHECK(sol.result.status == SolveStatus::Optimal);

    Signomial g(1);
    g.add_term({2}, 1.0);
    g.add_term({0}, 1.0);
    g.add_term({1}, -2.01);
    CHECK(solve_program(build_membership_standard(g)).result.status == SolveStatus::Infeasible);
}

TEST_CASE("trivial group reduced program equals the standard program")
{
    const Signomial f = eight_point(1.0, 2.0, -0.3, -0.5);
    const auto trivial = PermutationGroup::trivial(3);
    const auto a = build_bound_program(f, trivial, ProgramMode::Reduced);
    const auto b = build_bound_program(f, PermutationGroup::symmetric(3), ProgramMode::Standard);
    REQUIRE(a.num_variables() == b.num_variables());
    REQUIRE(a.num_equalities() == b.num_equalities());
    REQUIRE(a.num_inequalities() == b.num_inequalities());
    for (std::size_t j = 0; j < a.num_variables(); ++j) {
        CHECK(a.variables[j].name == b.variables[j].name);
    }
    const auto sa = solve_program(a);
    const auto sb = solve_program(b);
    REQUIRE(sa.result.status == SolveStatus::Optimal);
    REQUIRE(sb.result.status == SolveStatus::Optimal);
    CHECK(sa.objective == doctest::Approx(sb.objective).epsilon(1e-7));
}

TEST_CASE("reduced and standard bounds agree on random invariant signomials")
{
    std::mt19937 rng(1234);
    std::uniform_int_distribution<int> deg(0, 4);
    std::uniform_real_distribution<double> mag(0.2, 2.0);
    const std::vector<PermutationGroup> groups = {
        PermutationGroup::symmetric(3),
        PermutationGroup::young(3, {{0, 1}, {2}}),
        PermutationGroup::generated(3, {Permutation::from_cycles(3, {{1, 2, 3}})}),
    };
    int solved = 0;
    for (int trial = 0; trial < 24; ++trial) {
        const auto& g = groups[trial % groups.size()];
        Signomial raw(3);
        for (int t = 0; t < 3; ++t) {
            raw.add_term({deg(rng) * 2, deg(rng) * 2, deg(rng) * 2}, mag(rng));
        }
        raw.add_term({deg(rng), deg(rng), deg(rng)}, -mag(rng));
        const Signomial f = symmetrize(raw, g);
        CAPTURE(trial);
        const auto red = build_bound_program(f, g, ProgramMode::Reduced);
        const auto std_p = build_bound_program(f, g, ProgramMode::Standard);
        CHECK(red.num_variables() <= std_p.num_variables());
        const auto sr = solve_program(red);
        const auto ss = solve_program(std_p);
        CHECK(sr.result.status == ss.result.status);
        if (sr.result.status == SolveStatus::Optimal && ss.result.status == SolveStatus::Optimal) {
            CHECK(std::abs(sr.objective - ss.objective) <= 1e-6 * std::max(1.0, std::abs(ss.objective)));
            ++solved;
        }
    }
    CHECK(solved >= 12);
}

TEST_CASE("free origin block and box support")
{
    // f = e^x on [0, 1]: the origin block reaches the true minimum 1,
    // the inner-origin program stops at 0.
    Signomial f(1);
    f.add_term({1}, 1.0);
    BuildOptions opt;
    opt.support = SupportOracle::box({0.0}, {1.0});
    const auto g = PermutationGroup::trivial(1);
    const auto inner = solve_program(build_bound_program(f, g, ProgramMode::Reduced, opt));
    REQUIRE(inner.result.status == SolveStatus::Optimal);
    CHECK(std::abs(inner.objective) < 1e-7);

    opt.origin = OriginMode::Free;
    const auto p = build_bound_program(f, g, ProgramMode::Reduced, opt);
    CHECK(p.num_variables() == predict_program_sizes(f, g, ProgramMode::Reduced, Objective::MaximizeLambda, opt).variables);
    const auto free_sol = solve_program(p);
    REQUIRE(free_sol.result.status == SolveStatus::Optimal);
    CHECK(std::abs(free_sol.objective - 1.0) < 1e-6);

    // Without the box the same program is capped by c0 = 0.
    opt.support = SupportOracle::free_space();
    const auto unconstrained = solve_program(build_bound_program(f, g, ProgramMode::Reduced, opt));
    REQUIRE(unconstrained.result.status == SolveStatus::Optimal);
    CHECK(std::abs(unconstrained.objective) < 1e-6);
}

TEST_CASE("box support lowers the bound below the infimum on the box")
{
    // e^{2x} - 2 e^x has infimum -1 at x = 0; restricted to [1, 2] the minimum
    // is e^2 - 2e at x = 1.
    Signomial f(1);
    f.add_term({2}, 1.0);
    f.add_term({1}, -2.0);
    const auto g = PermutationGroup::trivial(1);
    BuildOptions opt;
    opt.origin = OriginMode::Free;
    const auto whole = solve_program(build_bound_program(f, g, ProgramMode::Standard, opt));
    REQUIRE(whole.result.status == SolveStatus::Optimal);
    CHECK(std::abs(whole.objective + 1.0) < 1e-6);

    opt.support = SupportOracle::box({1.0}, {2.0});
    const auto boxed = solve_program(build_bound_program(f, g, ProgramMode::Standard, opt));
    REQUIRE(boxed.result.status == SolveStatus::Optimal);
    const double box_min = std::exp(2.0) - 2.0 * std::exp(1.0);
    CHECK(boxed.objective <= box_min + 1e-6);
    CHECK(boxed.objective > -1.0 + 1e-3);
}

TEST_CASE("program residuals")
{
    Signomial f(1);
    f.add_term({2}, 1.0);
    f.add_term({0}, 1.0);
    f.add_term({1}, -2.0);
    const auto p = build_membership_standard(f);
    // Hand certificate: nu = (1, 1) on exponents 0 and 2, c = (1, 1).
    std::vector<double> x(p.num_variables(), 0.0);
    for (std::size_t j = 0; j < x.size(); ++j) {
        x[j] = 1.0;
    }
    CHECK(residuals(p, x).max() < 1e-12);
    x[p.meta.blocks[0].nu_vars[0]] += 0.1;
    CHECK(residuals(p, x).equality >= 0.09);
}

TEST_CASE("builder refusals")
{
    Signomial f(2);
    f.add_term({2, 0}, 1.0);
    f.add_term({0, 2}, 1.5);
    f.add_term({1, 1}, -1.0);
    CHECK_THROWS_AS(build_membership_reduced(f, PermutationGroup::symmetric(2)), std::invalid_argument);
    CHECK_THROWS_AS(build_membership_reduced(f, PermutationGroup::symmetric(3)), std::invalid_argument);

    BuildOptions opt;
    opt.support = SupportOracle::box({0.0, -1.0}, {1.0, 1.0});
    Signomial sym(2);
    sym.add_term({2, 0}, 1.0);
    sym.add_term({0, 2}, 1.0);
    sym.add_term({1, 1}, -1.0);
    CHECK_THROWS_AS(build_membership_reduced(sym, PermutationGroup::symmetric(2), opt), std::invalid_argument);
    CHECK_NOTHROW(build_membership_standard(sym, opt));

    opt = {};
    opt.max_variables = 3;
    CHECK_THROWS_AS(build_membership_standard(sym, opt), std::length_error);
    CHECK_THROWS_AS(SupportOracle::box({1.0}, {0.0}), std::invalid_argument);
}

TEST_CASE("canonical form shape and export")
{
    const Signomial f = eight_point(1.0, 1.0, -0.1, -0.1);
    const auto p = build_bound_program(f, PermutationGroup::symmetric(3), ProgramMode::Reduced);
    const auto form = canonicalize(p);
    std::size_t terms = 0;
    for (const auto& blk : p.blocks) {
        terms += blk.terms.size();
    }
    CHECK(form.program.num_exp == terms);
    CHECK(form.program.num_vars == p.num_variables() + terms);
    CHECK(form.program.num_eq == p.num_equalities());
    const auto doc = export_program(p);
    CHECK(doc.at("program").at("sizes").at("variables") == p.num_variables());
    const auto back = canonical_from_json(doc);
    CHECK(back.num_vars == form.program.num_vars);
}
