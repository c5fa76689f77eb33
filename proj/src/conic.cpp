#include "symsage/conic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace symsage {

void CanonicalProgram::validate() const
{
    auto check_triplets = [this](const std::vector<Triplet>& m, std::size_t rows, const char* name) {
        for (const auto& t : m) {
            if (t.row >= rows || t.col >= num_vars) {
                throw std::invalid_argument(std::string("entry of ") + name + " out of range");
            }
            if (!std::isfinite(t.value)) {
                throw std::invalid_argument(std::string("non-finite entry in ") + name);
            }
        }
    };
    if (c.size() != num_vars) {
        throw std::invalid_argument("objective length does not match the variable count");
    }
    if (!var_names.empty() && var_names.size() != num_vars) {
        throw std::invalid_argument("variable name list has the wrong length");
    }
    if (b.size() != num_eq) {
        throw std::invalid_argument("equality right-hand side has the wrong length");
    }
    if (h.size() != num_cone_rows()) {
        throw std::invalid_argument("cone right-hand side has the wrong length");
    }
    check_triplets(A, num_eq, "A");
    check_triplets(G, num_cone_rows(), "G");
    auto finite = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
    };
    if (!finite(c) || !finite(b) || !finite(h) || !std::isfinite(objective_offset)) {
        throw std::invalid_argument("non-finite program data");
    }
}

namespace {

nlohmann::json triplets_to_json(const std::vector<Triplet>& m)
{
    auto rows = nlohmann::json::array();
    auto cols = nlohmann::json::array();
    auto vals = nlohmann::json::array();
    for (const auto& t : m) {
        rows.push_back(t.row);
        cols.push_back(t.col);
        vals.push_back(t.value);
    }
    return {{"rows", rows}, {"cols", cols}, {"values", vals}};
}

std::vector<Triplet> triplets_from_json(const nlohmann::json& j)
{
    const auto& rows = j.at("rows");
    const auto& cols = j.at("cols");
    const auto& vals = j.at("values");
    if (rows.size() != cols.size() || rows.size() != vals.size()) {
        throw std::invalid_argument("sparse matrix arrays differ in length");
    }
    std::vector<Triplet> out(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        out[k] = {rows[k].get<std::size_t>(), cols[k].get<std::size_t>(), vals[k].get<double>()};
    }
    return out;
}

}  // namespace

nlohmann::json to_json(const CanonicalProgram& p)
{
    nlohmann::json out;
    out["format"] = "symsage-canonical-program";
    out["version"] = 1;
    out["sense"] = "minimize";
    out["num_vars"] = p.num_vars;
    out["variables"] = p.var_names;
    out["objective"] = {{"c", p.c}, {"offset", p.objective_offset}};
    out["equalities"] = {{"count", p.num_eq}, {"A", triplets_to_json(p.A)}, {"b", p.b}};
    out["cones"] = {{"nonnegative", p.num_linear},
                    {"exponential", p.num_exp},
                    {"G", triplets_to_json(p.G)},
                    {"h", p.h},
                    {"convention", "h - G x in R_+^l x K_exp^m, K_exp = cl{(x,y,z): y>0, y*exp(x/y) <= z}"}};
    return out;
}

CanonicalProgram canonical_from_json(const nlohmann::json& d)
{
    CanonicalProgram p;
    try {
        p.num_vars = d.at("num_vars").get<std::size_t>();
        if (d.contains("variables")) {
            p.var_names = d.at("variables").get<std::vector<std::string>>();
        }
        p.c = d.at("objective").at("c").get<std::vector<double>>();
        p.objective_offset = d.at("objective").value("offset", 0.0);
        p.num_eq = d.at("equalities").at("count").get<std::size_t>();
        p.A = triplets_from_json(d.at("equalities").at("A"));
        p.b = d.at("equalities").at("b").get<std::vector<double>>();
        p.num_linear = d.at("cones").at("nonnegative").get<std::size_t>();
        p.num_exp = d.at("cones").at("exponential").get<std::size_t>();
        p.G = triplets_from_json(d.at("cones").at("G"));
        p.h = d.at("cones").at("h").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed program document: ") + e.what());
    }
    p.validate();
    return p;
}

// ---------------------------------------------------------------------------
// Exponential cone projection

namespace {

bool in_exp_cone(double x, double y, double z)
{
    if (y > 0.0) {
        return z > 0.0 && x <= y * std::log(z / y);
    }
    return y == 0.0 && x <= 0.0 && z >= 0.0;
}

bool in_polar_cone(double x, double y, double z)
{
    // polar = -dual; dual = cl{(u,v,w): u < 0, -u exp(v/u) <= e w}
    const double u = -x;
    const double v = -y;
    const double w = -z;
    if (u < 0.0) {
        return w > 0.0 && std::log(-u / w) + v / u <= 1.0;
    }
    return u == 0.0 && v >= 0.0 && w >= 0.0;
}

double dist2(const std::array<double, 3>& a, const std::array<double, 3>& b)
{
    const double d0 = a[0] - b[0];
    const double d1 = a[1] - b[1];
    const double d2 = a[2] - b[2];
    return d0 * d0 + d1 * d1 + d2 * d2;
}

}  // namespace

std::array<double, 3> project_exp_cone(const std::array<double, 3>& v)
{
    const double r = v[0];
    const double s = v[1];
    const double t = v[2];
    if (in_exp_cone(r, s, t)) {
        return v;
    }
    if (in_polar_cone(r, s, t)) {
        return {0.0, 0.0, 0.0};
    }
    std::array<double, 3> best{std::min(r, 0.0), 0.0, std::max(t, 0.0)};
    if (r <= 0.0 && s <= 0.0) {
        return best;
    }

    // Smooth boundary points are y * (rho, 1, e^rho); for fixed rho the best
    // y is <w, v>_+ / |w|^2, so maximize phi(rho) = <w, v>_+^2 / |w|^2.
    auto phi = [&](double rho) {
        const double e = std::exp(rho);
        const double a = r * rho + s + t * e;
        if (a <= 0.0) {
            return 0.0;
        }
        return a * a / (rho * rho + 1.0 + e * e);
    };
    // Stationarity of phi: q(rho) = 0.
    auto q = [&](double rho) {
        const double e = std::exp(rho);
        const double e2 = e * e;
        return r * (1.0 + e2 * (1.0 - rho)) - s * (rho + e2) + t * e * (rho * rho - rho + 1.0);
    };
    auto dq = [&](double rho) {
        const double e = std::exp(rho);
        const double e2 = e * e;
        return r * e2 * (1.0 - 2.0 * rho) - s * (1.0 + 2.0 * e2) + t * e * (rho * rho + rho);
    };

    constexpr double lo_bound = -60.0;
    constexpr double hi_bound = 60.0;
    constexpr double step = 0.125;
    double best_rho = 0.0;
    double best_phi = -1.0;
    for (double rho = lo_bound; rho <= hi_bound; rho += step) {
        const double f = phi(rho);
        if (f > best_phi) {
            best_phi = f;
            best_rho = rho;
        }
    }
    if (best_phi > 0.0) {
        // Golden section, then safeguarded Newton on q inside the bracket.
        double lo = best_rho - step;
        double hi = best_rho + step;
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = hi - g * (hi - lo);
        double b = lo + g * (hi - lo);
        for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
            if (phi(a) < phi(b)) {
                lo = a;
                a = b;
                b = lo + g * (hi - lo);
            } else {
                hi = b;
                b = a;
                a = hi - g * (hi - lo);
            }
        }
        double rho = 0.5 * (lo + hi);
        double blo = best_rho - step;
        double bhi = best_rho + step;
        if (q(blo) * q(bhi) < 0.0) {
            for (int it = 0; it < 100; ++it) {
                const double fq = q(rho);
                if (fq == 0.0) {
                    break;
                }
                if ((fq < 0.0) == (q(blo) < 0.0)) {
                    blo = rho;
                } else {
                    bhi = rho;
                }
                const double d = dq(rho);
                double next = d != 0.0 ? rho - fq / d : 0.5 * (blo + bhi);
                if (!(next > blo && next < bhi)) {
                    next = 0.5 * (blo + bhi);
                }
                if (std::abs(next - rho) <= 1e-12 * std::max(1.0, std::abs(rho))) {
                    rho = next;
                    break;
                }
                rho = next;
            }
        }
        const double e = std::exp(rho);
        const double a_dot = r * rho + s + t * e;
        const double w2 = rho * rho + 1.0 + e * e;
        if (a_dot > 0.0) {
            const double y = a_dot / w2;
            const std::array<double, 3> cand{y * rho, y, y * e};
            if (dist2(cand, v) < dist2(best, v)) {
                best = cand;
            }
        }
    }
    const std::array<double, 3> origin{0.0, 0.0, 0.0};
    if (dist2(origin, v) < dist2(best, v)) {
        best = origin;
    }
    return best;
}

double exp_cone_distance(const std::array<double, 3>& v)
{
    return std::sqrt(dist2(v, project_exp_cone(v)));
}

// ---------------------------------------------------------------------------
// Residuals

double CanonicalResiduals::max() const
{
    return std::max({equality, inequality, cone});
}

CanonicalResiduals residuals(const CanonicalProgram& p, std::span<const double> x)
{
    if (x.size() != p.num_vars) {
        throw std::invalid_argument("point has " + std::to_string(x.size()) + " entries, program has " +
                                    std::to_string(p.num_vars) + " variables");
    }
    std::vector<long double> ax(p.num_eq, 0.0L);
    for (const auto& t : p.A) {
        ax[t.row] += static_cast<long double>(t.value) * x[t.col];
    }
    std::vector<long double> slack(p.num_cone_rows());
    for (std::size_t i = 0; i < slack.size(); ++i) {
        slack[i] = p.h[i];
    }
    for (const auto& t : p.G) {
        slack[t.row] -= static_cast<long double>(t.value) * x[t.col];
    }
    CanonicalResiduals out;
    for (std::size_t i = 0; i < p.num_eq; ++i) {
        out.equality = std::max(out.equality, static_cast<double>(std::abs(ax[i] - p.b[i])));
    }
    for (std::size_t i = 0; i < p.num_linear; ++i) {
        out.inequality = std::max(out.inequality, static_cast<double>(std::max(-slack[i], 0.0L)));
    }
    for (std::size_t k = 0; k < p.num_exp; ++k) {
        const std::size_t r0 = p.num_linear + 3 * k;
        out.cone = std::max(out.cone, exp_cone_distance({static_cast<double>(slack[r0]), static_cast<double>(slack[r0 + 1]),
                                                         static_cast<double>(slack[r0 + 2])}));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Configuration and results

std::string to_string(SolveStatus status)
{
    switch (status) {
    case SolveStatus::Optimal:
        return "optimal";
    case SolveStatus::Infeasible:
        return "infeasible";
    case SolveStatus::Unbounded:
        return "unbounded";
    case SolveStatus::IterationLimit:
        return "iteration_limit";
    case SolveStatus::NumericalTrouble:
        return "numerical_trouble";
    }
    return "unknown";
}

void SolverConfig::validate() const
{
    if (!(feasibility_tol > 0.0) || !(gap_tol > 0.0)) {
        throw std::invalid_argument("solver tolerances must be positive");
    }
    if (max_iterations <= 0) {
        throw std::invalid_argument("iteration limit must be positive");
    }
}

SolverConfig SolverConfig::from_environment()
{
    SolverConfig cfg;
    auto read = [](const char* name, double& target) {
        if (const char* v = std::getenv(name)) {
            char* end = nullptr;
            const double parsed = std::strtod(v, &end);
            if (end == v || *end != '\0' || !(parsed > 0.0)) {
                throw std::invalid_argument(std::string(name) + " must be a positive number");
            }
            target = parsed;
        }
    };
    read("SYMSAGE_FEAS_TOL", cfg.feasibility_tol);
    read("SYMSAGE_GAP_TOL", cfg.gap_tol);
    return cfg;
}

nlohmann::json to_json(const SolveResult& r, bool include_point)
{
    nlohmann::json out;
    out["status"] = to_string(r.status);
    out["objective"] = r.objective;
    out["iterations"] = r.iterations;
    out["solve_seconds"] = r.solve_seconds;
    out["residuals"] = {{"equality", r.residuals.equality},
                        {"inequality", r.residuals.inequality},
                        {"cone", r.residuals.cone},
                        {"dual", r.dual_residual},
                        {"relative_gap", r.relative_gap}};
    if (!r.message.empty()) {
        out["message"] = r.message;
    }
    if (include_point) {
        out["x"] = r.x;
    }
    return out;
}

}  // namespace symsage
