#include "cli.hpp"

#include "symsage/bench.hpp"
#include "symsage/certificate.hpp"
#include "symsage/program.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace symsage::cli {

namespace {

/// Bad input files and arguments that only show up after parsing.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

nlohmann::json read_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open " + path);
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw UsageError(path + ": " + e.what());
    }
}

Signomial read_signomial(const std::string& path)
{
    try {
        return parse_signomial(read_json(path));
    } catch (const std::invalid_argument& e) {
        throw UsageError(path + ": " + e.what());
    }
}

struct ProblemOptions {
    std::string input;
    std::string group_file;
    bool sym = false;
    bool standard = false;
    bool reduced = false;
    bool both = false;
    std::vector<double> box;
    std::string origin = "inner";

    void attach(CLI::App* cmd, bool with_origin = true)
    {
        cmd->add_option("signomial", input, "signomial JSON file")->required();
        auto* g = cmd->add_option("--group", group_file, "group JSON file");
        cmd->add_flag("--sym", sym, "full symmetric group on all coordinates")->excludes(g);
        auto* s = cmd->add_flag("--standard", standard, "standard program only");
        auto* r = cmd->add_flag("--reduced", reduced, "symmetry-reduced program only (default)");
        cmd->add_flag("--both", both, "standard and reduced programs")->excludes(s)->excludes(r);
        s->excludes(r);
        cmd->add_option("--box", box, "box [l, u] on every coordinate")->expected(2);
        if (with_origin) {
            cmd->add_option("--origin", origin, "zero exponent: inner term or own block")
                ->check(CLI::IsMember({"inner", "free"}));
        }
    }

    std::vector<ProgramMode> modes() const
    {
        if (both) {
            return {ProgramMode::Standard, ProgramMode::Reduced};
        }
        return {standard ? ProgramMode::Standard : ProgramMode::Reduced};
    }

    PermutationGroup group(std::size_t n) const
    {
        if (sym) {
            return PermutationGroup::symmetric(n);
        }
        if (group_file.empty()) {
            return PermutationGroup::trivial(n);
        }
        PermutationGroup g = PermutationGroup::trivial(1);
        try {
            g = PermutationGroup::from_json(read_json(group_file));
        } catch (const std::invalid_argument& e) {
            throw UsageError(group_file + ": " + e.what());
        }
        if (g.degree() != n) {
            throw UsageError("group degree " + std::to_string(g.degree()) + " does not match dimension " +
                             std::to_string(n));
        }
        return g;
    }

    BuildOptions build(std::size_t n) const
    {
        BuildOptions opt;
        if (!box.empty()) {
            try {
                opt.support = SupportOracle::box(std::vector<double>(n, box[0]), std::vector<double>(n, box[1]));
            } catch (const std::invalid_argument& e) {
                throw UsageError(std::string("--box: ") + e.what());
            }
        }
        opt.origin = origin == "free" ? OriginMode::Free : OriginMode::Inner;
        return opt;
    }
};

SolverConfig solver_config()
{
    try {
        return SolverConfig::from_environment();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int status_exit(SolveStatus s)
{
    switch (s) {
    case SolveStatus::Optimal:
        return kSuccess;
    case SolveStatus::Infeasible:
    case SolveStatus::Unbounded:
        return kNegative;
    default:
        return kNumerical;
    }
}

/// Solves bound, scale or membership programs in each requested mode.
int run_solve(const ProblemOptions& po, Objective objective, const std::string& cert_path, bool verify, bool json,
              std::ostream& out, std::ostream& err)
{
    const Signomial f = read_signomial(po.input);
    const PermutationGroup group = po.group(f.dimension());
    const BuildOptions opt = po.build(f.dimension());
    const SolverConfig cfg = solver_config();
    if (!cert_path.empty() && po.both) {
        throw UsageError("--certificate needs a single mode");
    }
    if (objective == Objective::Feasibility && sign_partition(f).negatives.empty()) {
        if (json) {
            out << nlohmann::json{{"member", true}, {"reason", "no negative terms"}}.dump() << "\n";
        } else {
            out << "member: yes (no negative terms)\n";
        }
        return kSuccess;
    }

    int code = kSuccess;
    std::vector<double> values;
    auto report = nlohmann::json::array();
    if (!json) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-9s %-17s %14s %8s %8s %10s %10s  %s\n", "mode", "status",
                      objective == Objective::MaximizeScale ? "delta" : "bound", "V", "C", "t_s", "t_r", "certificate");
        out << buf;
    }
    for (ProgramMode mode : po.modes()) {
        const auto t0 = std::chrono::steady_clock::now();
        ConicProgram p;
        try {
            switch (objective) {
            case Objective::MaximizeLambda:
                p = build_bound_program(f, group, mode, opt);
                break;
            case Objective::MaximizeScale:
                p = build_scale_program(f, group, mode, opt);
                break;
            case Objective::Feasibility:
                p = mode == ProgramMode::Standard ? build_membership_standard(f, opt)
                                                  : build_membership_reduced(f, group, opt);
                break;
            }
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        const ProgramSolution sol = solve_program(p, cfg);
        const double total = seconds_since(t0);
        int mode_code = status_exit(sol.result.status);
        std::string cert_state = "-";
        if (sol.result.status == SolveStatus::Optimal) {
            values.push_back(sol.objective);
            const ReducedCertificate cert = extract_certificate(p, sol);
            if (verify) {
                const bool ok = verify_certificate(f, cert).passed;
                cert_state = ok ? "pass" : "fail";
                if (!ok) {
                    mode_code = std::max(mode_code, static_cast<int>(kNegative));
                }
            }
            if (!cert_path.empty()) {
                std::ofstream file(cert_path);
                if (!file) {
                    throw UsageError("cannot write " + cert_path);
                }
                file << to_json(cert).dump(2) << "\n";
            }
        }
        code = std::max(code, mode_code);
        const bool has_value = sol.result.status == SolveStatus::Optimal;
        if (json) {
            nlohmann::json j = {{"mode", to_string(mode)},
                                {"status", to_string(sol.result.status)},
                                {"variables", p.num_variables()},
                                {"constraints", p.num_constraints()},
                                {"iterations", sol.result.iterations},
                                {"solve_seconds", sol.result.solve_seconds},
                                {"total_seconds", total},
                                {"certificate", cert_state}};
            j[objective == Objective::MaximizeScale ? "delta" : "bound"] =
                has_value ? nlohmann::json(sol.objective) : nlohmann::json(nullptr);
            if (!sol.result.message.empty()) {
                j["message"] = sol.result.message;
            }
            report.push_back(std::move(j));
        } else {
            char buf[200];
            std::string value = "-";
            if (has_value) {
                char num[64];
                std::snprintf(num, sizeof num, "%.8f", sol.objective);
                value = num;
            }
            std::snprintf(buf, sizeof buf, "%-9s %-17s %14s %8zu %8zu %10.4f %10.4f  %s\n", to_string(mode).c_str(),
                          to_string(sol.result.status).c_str(), objective == Objective::Feasibility ? "-" : value.c_str(),
                          p.num_variables(), p.num_constraints(), sol.result.solve_seconds, total, cert_state.c_str());
            out << buf;
            if (!sol.result.message.empty() && sol.result.status != SolveStatus::Optimal) {
                out << "  " << sol.result.message << "\n";
            }
        }
    }
    if (values.size() == 2 && objective != Objective::Feasibility &&
        std::abs(values[0] - values[1]) > 1e-5 * std::max(1.0, std::abs(values[0]))) {
        err << "standard and reduced values disagree\n";
        code = std::max(code, static_cast<int>(kNumerical));
    }
    if (json) {
        out << report.dump(2) << "\n";
    } else if (objective == Objective::Feasibility) {
        out << "member: " << (code == kSuccess ? "yes" : code == kNegative ? "no" : "undecided") << "\n";
    }
    return code;
}

int run_sizes(const ProblemOptions& po, Objective objective, std::ostream& out)
{
    const Signomial f = read_signomial(po.input);
    const PermutationGroup group = po.group(f.dimension());
    const BuildOptions opt = po.build(f.dimension());
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-9s %12s %12s %12s %12s\n", "mode", "variables", "equalities", "inequalities",
                  "constraints");
    out << buf;
    for (ProgramMode mode : po.modes()) {
        SizePrediction s;
        try {
            s = predict_program_sizes(f, group, mode, objective, opt);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        std::snprintf(buf, sizeof buf, "%-9s %12s %12s %12s %12s\n", to_string(mode).c_str(),
                      to_string(s.variables).c_str(), to_string(s.equalities).c_str(),
                      to_string(s.inequalities).c_str(), to_string(s.constraints()).c_str());
        out << buf;
    }
    return kSuccess;
}

std::vector<std::size_t> parse_range(const std::string& text)
{
    std::vector<std::size_t> ns;
    const auto number = [&](const std::string& s) {
        std::size_t pos = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(s, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != s.size() || s.empty()) {
            throw UsageError("bad dimension '" + s + "' in --n");
        }
        return static_cast<std::size_t>(v);
    };
    if (const auto dots = text.find(".."); dots != std::string::npos) {
        const std::size_t a = number(text.substr(0, dots));
        const std::size_t b = number(text.substr(dots + 2));
        if (a > b) {
            throw UsageError("empty range " + text);
        }
        for (std::size_t n = a; n <= b; ++n) {
            ns.push_back(n);
        }
        return ns;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        ns.push_back(number(item));
    }
    return ns;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"SAGE bounds and certificates for signomials, with symmetry reduction", "symsage"};
    app.require_subcommand(1);

    ProblemOptions bound_opt;
    bool maximize_coefficient = false;
    std::string bound_cert;
    bool bound_no_verify = false;
    bool bound_json = false;
    auto* bound = app.add_subcommand("bound", "largest lambda with f - lambda SAGE");
    bound_opt.attach(bound);
    bound->add_flag("--maximize-coefficient", maximize_coefficient,
                    "largest delta with f_+ + delta f_- SAGE instead of a lower bound");
    bound->add_option("--certificate", bound_cert, "write the certificate JSON here");
    bound->add_flag("--no-verify", bound_no_verify, "skip certificate verification");
    bound->add_flag("--json", bound_json, "JSON output");

    ProblemOptions member_opt;
    std::string member_cert;
    bool member_json = false;
    auto* member = app.add_subcommand("member", "decide SAGE membership of f");
    member_opt.attach(member, false);
    member->add_option("--certificate", member_cert, "write the certificate JSON here");
    member->add_flag("--json", member_json, "JSON output");

    ProblemOptions sizes_opt;
    bool sizes_bound = false;
    bool sizes_scale = false;
    auto* sizes = app.add_subcommand("sizes", "predicted program sizes, no solve");
    sizes_opt.attach(sizes);
    auto* sb = sizes->add_flag("--bound", sizes_bound, "sizes of the bound program (default: membership)");
    sizes->add_flag("--maximize-coefficient", sizes_scale, "sizes of the coefficient program")->excludes(sb);

    std::string bench_family;
    std::string bench_n;
    bool bench_standard = false;
    bool bench_reduced = false;
    bool bench_json = false;
    bool bench_no_verify = false;
    std::size_t bench_cap = kFactorialFamilyCap;
    auto* bench = app.add_subcommand("bench", "benchmark families f1, f2, f3, f4, g");
    bench->add_option("family", bench_family, "family name")->required()->check(CLI::IsMember({"f1", "f2", "f3", "f4", "g"}));
    bench->add_option("--n", bench_n, "dimensions, a..b or a,b,c")->required();
    auto* bs = bench->add_flag("--standard", bench_standard, "standard method only");
    bench->add_flag("--reduced", bench_reduced, "reduced method only")->excludes(bs);
    bench->add_flag("--both", [](std::int64_t) {}, "both methods (default)");
    bench->add_option("--cap", bench_cap, "largest n for families with orbits of size n!");
    bench->add_flag("--json", bench_json, "JSON lines instead of a table");
    bench->add_flag("--no-verify", bench_no_verify, "skip certificate verification");

    std::string sym_input;
    ProblemOptions sym_opt;
    auto* symm = app.add_subcommand("symmetrize", "Reynolds average of f over a group");
    symm->add_option("signomial", sym_opt.input, "signomial JSON file")->required();
    auto* sg = symm->add_option("--group", sym_opt.group_file, "group JSON file");
    symm->add_flag("--sym", sym_opt.sym, "full symmetric group")->excludes(sg);

    ProblemOptions export_opt;
    std::string export_format = "program-json";
    bool export_bound = false;
    bool export_scale = false;
    auto* exp = app.add_subcommand("export", "write the conic program as JSON");
    export_opt.attach(exp);
    exp->add_option("--format", export_format, "output format")->check(CLI::IsMember({"program-json"}));
    auto* eb = exp->add_flag("--bound", export_bound, "bound program (default: membership)");
    exp->add_flag("--maximize-coefficient", export_scale, "coefficient program")->excludes(eb);

    std::string solve_input;
    auto* solve_cmd = app.add_subcommand("solve", "solve an exported conic program JSON");
    solve_cmd->add_option("program", solve_input, "program JSON file")->required();

    std::string verify_f;
    std::string verify_cert;
    double verify_tol = 1e-6;
    bool verify_json = false;
    auto* verify = app.add_subcommand("verify", "check a certificate against f");
    verify->add_option("signomial", verify_f, "signomial JSON file")->required();
    verify->add_option("certificate", verify_cert, "certificate JSON file")->required();
    verify->add_option("--tol", verify_tol, "tolerance")->check(CLI::PositiveNumber);
    verify->add_flag("--json", verify_json, "JSON report");

    std::string gen_family;
    std::size_t gen_n = 0;
    auto* gen = app.add_subcommand("generate", "write a benchmark family member as signomial JSON");
    gen->add_option("family", gen_family, "family name")->required()->check(CLI::IsMember({"f1", "f2", "f3", "f4", "g"}));
    gen->add_option("--n", gen_n, "dimension")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "symsage: " << e.what() << "\n";
        if (const auto subs = app.get_subcommands(); !subs.empty()) {
            err << subs.front()->help();
        } else {
            err << app.help();
        }
        return kUsage;
    }

    try {
        if (bound->parsed()) {
            return run_solve(bound_opt, maximize_coefficient ? Objective::MaximizeScale : Objective::MaximizeLambda,
                             bound_cert, !bound_no_verify, bound_json, out, err);
        }
        if (member->parsed()) {
            return run_solve(member_opt, Objective::Feasibility, member_cert, true, member_json, out, err);
        }
        if (sizes->parsed()) {
            const Objective o = sizes_bound ? Objective::MaximizeLambda
                                            : (sizes_scale ? Objective::MaximizeScale : Objective::Feasibility);
            return run_sizes(sizes_opt, o, out);
        }
        if (bench->parsed()) {
            BenchmarkOptions bo;
            bo.solver = solver_config();
            bo.verify = !bench_no_verify;
            bo.cap = bench_cap;
            if (bench_standard) {
                bo.modes = {ProgramMode::Standard};
            } else if (bench_reduced) {
                bo.modes = {ProgramMode::Reduced};
            }
            std::vector<BenchmarkRow> rows;
            try {
                rows = run_benchmark(bench_family, parse_range(bench_n), bo);
            } catch (const std::length_error& e) {
                throw UsageError(e.what());
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            int code = kSuccess;
            for (const auto& row : rows) {
                for (const auto& m : row.methods) {
                    code = std::max(code, status_exit(m.status));
                    if (m.certificate_passed && !*m.certificate_passed) {
                        code = std::max(code, static_cast<int>(kNegative));
                    }
                }
                if (!row.bounds_agree()) {
                    code = std::max(code, static_cast<int>(kNumerical));
                }
                if (bench_json) {
                    out << to_json(row).dump() << "\n";
                }
            }
            if (!bench_json) {
                out << render_table(rows);
            }
            return code;
        }
        if (symm->parsed()) {
            const Signomial f = read_signomial(sym_opt.input);
            out << to_json(symmetrize(f, sym_opt.group(f.dimension()))).dump(2) << "\n";
            return kSuccess;
        }
        if (exp->parsed()) {
            const Signomial f = read_signomial(export_opt.input);
            const PermutationGroup group = export_opt.group(f.dimension());
            const BuildOptions opt = export_opt.build(f.dimension());
            if (export_opt.both) {
                throw UsageError("export writes one program; pick --standard or --reduced");
            }
            const ProgramMode mode = export_opt.modes().front();
            ConicProgram p;
            try {
                if (export_bound) {
                    p = build_bound_program(f, group, mode, opt);
                } else if (export_scale) {
                    p = build_scale_program(f, group, mode, opt);
                } else {
                    p = mode == ProgramMode::Standard ? build_membership_standard(f, opt)
                                                      : build_membership_reduced(f, group, opt);
                }
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            out << export_program(p).dump(2) << "\n";
            return kSuccess;
        }
        if (solve_cmd->parsed()) {
            CanonicalProgram p;
            try {
                p = canonical_from_json(read_json(solve_input));
            } catch (const std::invalid_argument& e) {
                throw UsageError(solve_input + ": " + e.what());
            } catch (const nlohmann::json::exception& e) {
                throw UsageError(solve_input + ": " + e.what());
            }
            const SolveResult r = solve(p, solver_config());
            out << to_json(r).dump(2) << "\n";
            return status_exit(r.status);
        }
        if (verify->parsed()) {
            const Signomial f = read_signomial(verify_f);
            ReducedCertificate cert;
            try {
                cert = certificate_from_json(read_json(verify_cert));
            } catch (const std::invalid_argument& e) {
                throw UsageError(verify_cert + ": " + e.what());
            } catch (const nlohmann::json::exception& e) {
                throw UsageError(verify_cert + ": " + e.what());
            }
            const VerificationReport report = verify_certificate(f, cert, verify_tol);
            if (verify_json) {
                out << to_json(report).dump(2) << "\n";
            } else {
                for (const auto& c : report.checks) {
                    char buf[200];
                    std::snprintf(buf, sizeof buf, "%-15s %-4s %.3e  %s\n", c.name.c_str(), c.passed ? "ok" : "FAIL",
                                  c.violation, c.detail.c_str());
                    out << buf;
                }
                out << (report.passed ? "certificate verified" : "certificate rejected") << "\n";
            }
            return report.passed ? kSuccess : kNegative;
        }
        if (gen->parsed()) {
            try {
                out << to_json(generate_family(gen_family, gen_n).f).dump(2) << "\n";
            } catch (const std::exception& e) {
                throw UsageError(e.what());
            }
            return kSuccess;
        }
    } catch (const UsageError& e) {
        err << "symsage: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "symsage: " << e.what() << "\n";
        return kNumerical;
    }
    return kUsage;
}

}  // namespace symsage::cli
