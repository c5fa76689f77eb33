#include "symsage/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace symsage {

namespace {

ExponentVector from_ints(const std::vector<std::int64_t>& v)
{
    return ExponentVector(std::vector<Rational>(v.begin(), v.end()));
}

/// Adds c e^<sigma alpha> for every distinct permutation of alpha.
void add_orbit(Signomial& f, std::vector<std::int64_t> alpha, double c)
{
    std::sort(alpha.begin(), alpha.end());
    do {
        f.add_term(from_ints(alpha), c);
    } while (std::next_permutation(alpha.begin(), alpha.end()));
}

std::vector<std::int64_t> axis(std::size_t n, std::int64_t value)
{
    std::vector<std::int64_t> v(n, 0);
    v[0] = value;
    return v;
}

std::vector<std::int64_t> ramp(std::size_t n, std::int64_t (*entry)(std::int64_t))
{
    std::vector<std::int64_t> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = entry(static_cast<std::int64_t>(i) + 1);
    }
    return v;
}

double factorial_double(std::size_t n)
{
    double r = 1.0;
    for (std::size_t i = 2; i <= n; ++i) {
        r *= static_cast<double>(i);
    }
    return r;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

bool has_factorial_orbit(const std::string& family)
{
    return family == "f1" || family == "f2" || family == "f3" || family == "g";
}

Family generate_family(const std::string& name, std::size_t n, std::size_t cap)
{
    if (n < 2) {
        throw std::invalid_argument("family dimension must be at least 2");
    }
    if (has_factorial_orbit(name) && n > cap) {
        throw std::length_error("family " + name + " has an orbit of size " + std::to_string(n) +
                                "!; n = " + std::to_string(n) + " is above the cap " + std::to_string(cap));
    }
    const auto nn = static_cast<std::int64_t>(n);
    const double nd = static_cast<double>(n);
    Family fam;
    fam.name = name;
    fam.n = n;
    fam.group = PermutationGroup::symmetric(n);
    fam.f = Signomial(n);
    Signomial& f = fam.f;
    const auto identity_ramp = ramp(n, [](std::int64_t i) { return i; });
    if (name == "f1") {
        add_orbit(f, identity_ramp, nd);
        add_orbit(f, std::vector<std::int64_t>(n, 1), -nd);
    } else if (name == "f2") {
        add_orbit(f, axis(n, nn * nn), 1.0);
        add_orbit(f, identity_ramp, -1.0 / factorial_double(n - 1));
    } else if (name == "f3") {
        add_orbit(f, ramp(n, [](std::int64_t i) { return 2 * i * i; }), 1.0 / factorial_double(n));
        add_orbit(f, identity_ramp, -1.0 / factorial_double(n));
    } else if (name == "f4") {
        add_orbit(f, axis(n, nn * nn), 1.0);
        std::vector<std::int64_t> beta(n, nn - 1);
        beta[0] = nn;
        add_orbit(f, beta, -1.0);
    } else if (name == "g") {
        add_orbit(f, axis(n, nn * nn), 1.0 / nd);
        add_orbit(f, ramp(n, [](std::int64_t i) { return i * i; }), 1.0 / factorial_double(n));
        add_orbit(f, std::vector<std::int64_t>(n, 1), -1.0);
        add_orbit(f, identity_ramp, -1.0 / factorial_double(n));
    } else {
        throw std::invalid_argument("unknown family '" + name + "' (expected f1, f2, f3, f4 or g)");
    }
    return fam;
}

const MethodResult* BenchmarkRow::find(ProgramMode mode) const
{
    for (const auto& m : methods) {
        if (m.mode == mode) {
            return &m;
        }
    }
    return nullptr;
}

bool BenchmarkRow::bounds_agree() const
{
    const MethodResult* s = find(ProgramMode::Standard);
    const MethodResult* r = find(ProgramMode::Reduced);
    if (!s || !r || s->status != SolveStatus::Optimal || r->status != SolveStatus::Optimal) {
        return true;
    }
    return std::abs(s->bound - r->bound) <= 1e-5 * std::max(1.0, std::abs(s->bound));
}

BenchmarkRow run_row(const Family& family, const BenchmarkOptions& options)
{
    BenchmarkRow row;
    row.family = family.name;
    row.n = family.n;
    for (ProgramMode mode : options.modes) {
        MethodResult m;
        m.mode = mode;
        const auto t0 = std::chrono::steady_clock::now();
        const SizePrediction predicted =
            predict_program_sizes(family.f, family.group, mode, Objective::MaximizeLambda);
        const ConicProgram p = build_bound_program(family.f, family.group, mode);
        m.build_seconds = seconds_since(t0);
        m.variables = p.num_variables();
        m.constraints = p.num_constraints();
        if (BigInt(m.variables) != predicted.variables ||
            BigInt(m.constraints) != predicted.equalities + predicted.inequalities) {
            throw std::logic_error(family.name + " n=" + std::to_string(family.n) + " " + to_string(mode) +
                                   ": built sizes differ from the prediction");
        }
        const ProgramSolution sol = solve_program(p, options.solver);
        m.total_seconds = seconds_since(t0);
        m.solve_seconds = sol.result.solve_seconds;
        m.status = sol.result.status;
        m.bound = sol.objective;
        m.iterations = sol.result.iterations;
        m.message = sol.result.message;
        if (options.verify && m.status == SolveStatus::Optimal) {
            const ReducedCertificate cert = extract_certificate(p, sol);
            m.certificate_passed = verify_certificate(family.f, cert, options.verify_tol).passed;
        }
        row.methods.push_back(std::move(m));
    }
    return row;
}

std::vector<BenchmarkRow> run_benchmark(const std::string& family, const std::vector<std::size_t>& ns,
                                        const BenchmarkOptions& options)
{
    std::vector<BenchmarkRow> rows;
    for (std::size_t n : ns) {
        rows.push_back(run_row(generate_family(family, n, options.cap), options));
    }
    return rows;
}

std::string render_table(const std::vector<BenchmarkRow>& rows)
{
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-6s %4s %11s  %-9s %8s %8s %10s %10s  %-16s %s\n", "family", "dim", "bound",
                  "method", "V_n", "C_n", "t_s", "t_r", "status", "cert");
    out += buf;
    for (const auto& row : rows) {
        for (const auto& m : row.methods) {
            const char* cert = !m.certificate_passed ? "-" : (*m.certificate_passed ? "pass" : "FAIL");
            std::snprintf(buf, sizeof buf, "%-6s %4zu %11.4f  %-9s %8zu %8zu %10.4f %10.4f  %-16s %s\n",
                          row.family.c_str(), row.n, m.bound, to_string(m.mode).c_str(), m.variables, m.constraints,
                          m.solve_seconds, m.total_seconds, to_string(m.status).c_str(), cert);
            out += buf;
        }
        if (!row.bounds_agree()) {
            out += "  warning: standard and reduced bounds disagree\n";
        }
    }
    return out;
}

nlohmann::json to_json(const BenchmarkRow& row, bool include_timing)
{
    auto methods = nlohmann::json::array();
    for (const auto& m : row.methods) {
        nlohmann::json j = {{"mode", to_string(m.mode)},
                            {"status", to_string(m.status)},
                            {"bound", m.bound},
                            {"variables", m.variables},
                            {"constraints", m.constraints},
                            {"iterations", m.iterations}};
        j["certificate"] = m.certificate_passed ? nlohmann::json(*m.certificate_passed) : nlohmann::json(nullptr);
        if (include_timing) {
            j["build_seconds"] = m.build_seconds;
            j["solve_seconds"] = m.solve_seconds;
            j["total_seconds"] = m.total_seconds;
        }
        methods.push_back(std::move(j));
    }
    return {{"family", row.family}, {"n", row.n}, {"bounds_agree", row.bounds_agree()}, {"methods", std::move(methods)}};
}

}  // namespace symsage
