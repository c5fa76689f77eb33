#include <doctest.h>

#include "symsage/bench.hpp"
#include "symsage/certificate.hpp"

#include <cmath>
#include <map>
#include <random>

using namespace symsage;

namespace {

struct Solved {
    ConicProgram program;
    ProgramSolution solution;
    ReducedCertificate cert;
};

Solved solve_bound(const Signomial& f, const PermutationGroup& g, ProgramMode mode, const BuildOptions& opt = {})
{
    Solved s{build_bound_program(f, g, mode, opt), {}, {}};
    s.solution = solve_program(s.program);
    REQUIRE(s.solution.result.status == SolveStatus::Optimal);
    s.cert = extract_certificate(s.program, s.solution);
    return s;
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

// e^{2x} + 1 + b e^x: nonnegative iff b >= -2. The witness for b = -2 is
// nu = (1, 1), c = (1, 1): 2 (1 ln(1/e)) = -2.
ReducedCertificate am_gm_certificate(double beta_coefficient)
{
    ReducedCertificate cert;
    cert.mode = ProgramMode::Standard;
    cert.objective = Objective::Feasibility;
    cert.group = PermutationGroup::trivial(1);
    cert.dimension = 1;
    cert.inner = {{ExponentVector{0}, 1.0, 1, true}, {ExponentVector{2}, 1.0, 1, false}};
    CertificateBlock blk;
    blk.beta = ExponentVector{1};
    blk.beta_coefficient = beta_coefficient;
    blk.coordinate_blocks = {{0}};
    blk.classes = {{ExponentVector{0}, 1, 0, 1.0, 1.0}, {ExponentVector{2}, 1, 1, 1.0, 1.0}};
    cert.blocks = {blk};
    return cert;
}

Signomial am_gm(double b)
{
    Signomial f(1);
    f.add_term({2}, 1.0);
    f.add_term({0}, 1.0);
    f.add_term({1}, b);
    return f;
}

/// h(x) e^{-<beta,x>} in long double; the sign of h is the sign of this.
long double scaled_value(const AGESummand& s, const std::vector<double>& x)
{
    long double v = s.beta_coefficient;
    const long double bx = s.beta.dot(x);
    for (const auto& t : s.terms) {
        v += t.c * std::exp(t.alpha.dot(x) - bx);
    }
    return v;
}

Signomial sum_of(const AGEDecomposition& d)
{
    Signomial total = d.remainder;
    for (const auto& s : d.summands) {
        for (const auto& t : s.terms) {
            total.add_term(t.alpha, t.c);
        }
        total.add_term(s.beta, s.beta_coefficient);
    }
    return total;
}

double max_deviation(const Signomial& a, const Signomial& b)
{
    double d = 0.0;
    for (const auto& [alpha, c] : a) {
        d = std::max(d, std::abs(c - b.coefficient(alpha)));
    }
    for (const auto& [alpha, c] : b) {
        d = std::max(d, std::abs(c - a.coefficient(alpha)));
    }
    return d;
}

}  // namespace

TEST_CASE("hand-built AM/GM witness verifies and its perturbation does not")
{
    const auto good = verify_certificate(am_gm(-2.0), am_gm_certificate(-2.0), 1e-9);
    CHECK(good.passed);
    CHECK(good.check("entropy").violation <= 1e-15);

    // The stored coefficient still says -2, f says -2.01: reconstruction and
    // entropy both notice.
    const auto bad = verify_certificate(am_gm(-2.01), am_gm_certificate(-2.0), 1e-6);
    CHECK_FALSE(bad.passed);
    CHECK(bad.check("entropy").violation == doctest::Approx(0.01 / 2.01).epsilon(1e-9));
    CHECK(bad.check("reconstruction").violation == doctest::Approx(0.01).epsilon(1e-9));

    auto unbalanced = am_gm_certificate(-2.0);
    unbalanced.blocks[0].classes[0].nu = 1.5;
    CHECK_FALSE(verify_certificate(am_gm(-2.0), unbalanced).check("balance").passed);
}

TEST_CASE("zero c under positive nu gives an infinite entropy")
{
    auto cert = am_gm_certificate(-2.0);
    cert.blocks[0].classes[1].c = 0.0;
    const auto report = verify_certificate(am_gm(-2.0), cert);
    CHECK_FALSE(report.passed);
    CHECK(std::isinf(report.check("entropy").violation));
}

TEST_CASE("scale example: witness values, three summands and coefficient identities")
{
    const Signomial f = scale_example();
    const auto s3 = PermutationGroup::symmetric(3);
    const ConicProgram p = build_scale_program(f, s3, ProgramMode::Reduced);
    const ProgramSolution sol = solve_program(p);
    REQUIRE(sol.result.status == SolveStatus::Optimal);
    const ReducedCertificate cert = extract_certificate(p, sol);
    REQUIRE(cert.scale);
    CHECK(*cert.scale == doctest::Approx(std::cbrt(9.0 / 4.0)).epsilon(1e-6));

    REQUIRE(cert.blocks.size() == 1);
    std::map<ExponentVector, double> c;
    for (const auto& cls : cert.blocks[0].classes) {
        c[cls.representative] = cls.c;
    }
    CHECK(std::abs(c.at(ExponentVector{1, 1, 1}) - 1.0 / 3.0) < 1e-4);
    CHECK(std::abs(c.at(ExponentVector{0, 0, 6}) - 1.0 / 6.0) < 1e-4);
    CHECK(std::abs(c.at(ExponentVector{6, 0, 0}) - 5.0 / 12.0) < 1e-4);

    const AGEDecomposition d = expand_certificate(cert);
    REQUIRE(d.summands.size() == 3);
    const Signomial total = sum_of(d);
    // 3a = 1 at the centre and b + c + d = 1 on each axis.
    CHECK(total.coefficient(ExponentVector{1, 1, 1}) == doctest::Approx(1.0).epsilon(1e-9));
    for (const auto& axis : {ExponentVector{6, 0, 0}, ExponentVector{0, 6, 0}, ExponentVector{0, 0, 6}}) {
        CHECK(total.coefficient(axis) == doctest::Approx(1.0).epsilon(1e-9));
    }
    for (const auto& s : d.summands) {
        // c = d: the two axis exponents off beta's odd coordinate match.
        std::vector<double> big;
        for (const auto& t : s.terms) {
            if (t.alpha != ExponentVector{1, 1, 1} && t.alpha.dot(std::vector<double>(s.beta.to_doubles())) > 6.5) {
                big.push_back(t.c);
            }
        }
        REQUIRE(big.size() == 2);
        CHECK(big[0] == doctest::Approx(big[1]).epsilon(1e-12));
    }
    CHECK(max_deviation(total, certified_target(f, cert)) < 1e-9);
    CHECK(verify_certificate(f, cert, 1e-6).passed);
}

TEST_CASE("second family at n = 3: certificate passes, inflated bound fails, JSON round trip")
{
    const Family fam = generate_family("f2", 3);
    const Solved s = solve_bound(fam.f, fam.group, ProgramMode::Reduced);
    REQUIRE(s.cert.lambda);
    CHECK(std::abs(*s.cert.lambda - -0.4444) < 1e-3);
    const auto report = verify_certificate(fam.f, s.cert, 1e-6);
    CHECK(report.passed);

    ReducedCertificate inflated = s.cert;
    *inflated.lambda += 0.01;
    const auto worse = verify_certificate(fam.f, inflated, 1e-6);
    CHECK_FALSE(worse.passed);
    CHECK_FALSE(worse.check("budget").passed);

    const std::string text = to_json(s.cert).dump();
    const ReducedCertificate back = certificate_from_json(nlohmann::json::parse(text));
    CHECK(to_json(back).dump() == text);
    CHECK(to_json(verify_certificate(fam.f, back, 1e-6)).dump() == to_json(report).dump());

    nlohmann::json doc = nlohmann::json::parse(text);
    doc["version"] = 99;
    CHECK_THROWS_AS(certificate_from_json(doc), std::invalid_argument);
}

TEST_CASE("first family at n = 3: expansion reproduces f - lambda")
{
    const Family fam = generate_family("f1", 3);
    for (auto mode : {ProgramMode::Reduced, ProgramMode::Standard}) {
        CAPTURE(to_string(mode));
        const Solved s = solve_bound(fam.f, fam.group, mode);
        const AGEDecomposition d = expand_certificate(s.cert);
        CHECK(d.summands.size() == 1);
        CHECK(max_deviation(sum_of(d), certified_target(fam.f, s.cert)) < 1e-8);
        CHECK(verify_certificate(fam.f, s.cert, 1e-6).passed);
    }
}

TEST_CASE("standard certificates are the per-beta witnesses")
{
    const Family fam = generate_family("g", 2);
    const Solved s = solve_bound(fam.f, fam.group, ProgramMode::Standard);
    CHECK(s.cert.group.is_trivial());
    const AGEDecomposition d = expand_certificate(s.cert);
    REQUIRE(d.summands.size() == s.cert.blocks.size());
    for (std::size_t b = 0; b < d.summands.size(); ++b) {
        const auto& blk = s.cert.blocks[b];
        const auto& sum = d.summands[b];
        CHECK(sum.beta == blk.beta);
        REQUIRE(sum.terms.size() == blk.classes.size());
        for (std::size_t k = 0; k < blk.classes.size(); ++k) {
            CHECK(blk.classes[k].size == 1);
            CHECK(sum.terms[k].alpha == blk.classes[k].representative);
            CHECK(sum.terms[k].c == blk.classes[k].c);
            CHECK(sum.terms[k].nu == blk.classes[k].nu);
        }
    }
    CHECK(verify_certificate(fam.f, s.cert).passed);
}

TEST_CASE("no negative terms: empty certificate, the remainder is f")
{
    Signomial f(2);
    f.add_term({2, 0}, 1.0);
    f.add_term({0, 2}, 1.0);
    f.add_term({1, 1}, 0.5);
    const auto g = PermutationGroup::symmetric(2);
    const ConicProgram p = build_membership_reduced(f, g);
    const ProgramSolution sol = solve_program(p);
    REQUIRE(sol.result.status == SolveStatus::Optimal);
    const ReducedCertificate cert = extract_certificate(p, sol);
    CHECK(cert.blocks.empty());
    const AGEDecomposition d = expand_certificate(cert);
    CHECK(d.summands.empty());
    CHECK(d.remainder == f);
    CHECK(verify_certificate(f, cert).passed);
}

TEST_CASE("box and free-origin certificates")
{
    // e^x + e^-x has minimum 2, reached only with the origin's own block.
    Signomial cosh2(1);
    cosh2.add_term({1}, 1.0);
    cosh2.add_term({-1}, 1.0);
    BuildOptions opt;
    opt.origin = OriginMode::Free;
    const auto s1 = PermutationGroup::symmetric(1);
    const Solved s = solve_bound(cosh2, s1, ProgramMode::Reduced, opt);
    CHECK(*s.cert.lambda == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(verify_certificate(cosh2, s.cert).passed);
    ReducedCertificate inflated = s.cert;
    *inflated.lambda += 0.01;
    CHECK_FALSE(verify_certificate(cosh2, inflated).passed);

    // e^{2x} - 3 e^x on [-1, 1]: minimum at x = ln 1.5 is -2.25.
    Signomial q(1);
    q.add_term({2}, 1.0);
    q.add_term({1}, -3.0);
    opt.support = SupportOracle::box({-1.0}, {1.0});
    const Solved b = solve_bound(q, s1, ProgramMode::Reduced, opt);
    CHECK(*b.cert.lambda <= -2.25 + 1e-6);
    CHECK(verify_certificate(q, b.cert).passed);
    inflated = b.cert;
    *inflated.lambda = -2.25 + 0.01;
    CHECK_FALSE(verify_certificate(q, inflated).passed);
}

TEST_CASE("a certificate for another signomial fails the structure check")
{
    const Family a = generate_family("f1", 2);
    const Family b = generate_family("f3", 2);
    const Solved s = solve_bound(a.f, a.group, ProgramMode::Reduced);
    const auto report = verify_certificate(b.f, s.cert);
    CHECK_FALSE(report.passed);
    CHECK_FALSE(report.check("structure").passed);
}

TEST_CASE("expanded summands are AGE and nonnegative on random points")
{
    std::mt19937 rng(77);
    std::uniform_int_distribution<int> deg(0, 3);
    std::uniform_real_distribution<double> mag(0.2, 2.0);
    std::uniform_real_distribution<double> point(-3.0, 3.0);
    const auto s3 = PermutationGroup::symmetric(3);
    const double tol = 1e-6;
    int checked = 0;
    for (int trial = 0; trial < 12; ++trial) {
        Signomial raw(3);
        for (int t = 0; t < 3; ++t) {
            raw.add_term({deg(rng) * 2, deg(rng) * 2, deg(rng) * 2}, mag(rng));
        }
        raw.add_term({deg(rng), deg(rng), deg(rng)}, -mag(rng));
        const Signomial f = symmetrize(raw, s3);
        const ConicProgram p = build_bound_program(f, s3, ProgramMode::Reduced);
        const ProgramSolution sol = solve_program(p);
        if (sol.result.status != SolveStatus::Optimal) {
            continue;
        }
        CAPTURE(trial);
        const ReducedCertificate cert = extract_certificate(p, sol);
        const auto report = verify_certificate(f, cert, tol);
        const std::string detail = to_json(report).dump();
        CAPTURE(detail);
        CHECK(report.passed);
        for (const auto& s : expand_certificate(cert).summands) {
            double scale = std::abs(s.beta_coefficient);
            for (const auto& t : s.terms) {
                CHECK(t.c >= 0.0);
                CHECK(t.alpha != s.beta);
                scale = std::max(scale, t.c);
            }
            for (int k = 0; k < 100; ++k) {
                const std::vector<double> x = {point(rng), point(rng), point(rng)};
                CHECK(scaled_value(s, x) >= -10.0 * tol * std::max(1.0, scale));
            }
        }
        ++checked;
    }
    CHECK(checked >= 6);
}
