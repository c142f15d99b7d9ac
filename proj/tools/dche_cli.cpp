// Command-line front end: coefficient tables, series evaluation, q-spectra,
// recurrence derivation dumps, verification and oracle comparison.

#include "dche/dche.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace dche;

constexpr const char* kFormatHelp =
    "Output format. csv/table columns per subcommand:\n"
    "  coeffs:         n, a_n, then the stencil entries of row n (R,Q,P / T,S,R,Q,P / A,B,T,S,R,Q,P)\n"
    "  eval:           z, u, du, d2u, residual, rel_residual, terms, converged\n"
    "  terminate:      q, multiplicity, exact, a_next, a_next2, residual, certified, form\n"
    "  derive:         n, clearing, row entries (coefficient of a_{n-i}), diagnostic\n"
    "  verify:         check, status, detail\n"
    "  oracle-compare: z, series, integrated, deviation, integration_error, series_converged\n"
    "Complex values are written re+imi in csv/table and {re, im} in json.";

struct Config {
    std::string alpha = "0", gamma = "0", delta = "0", epsilon = "1", q = "0";
    std::string family = "three-term-a";
    long terms = 20;
    long order = 0;
    std::string z;
    std::string z_grid;
    std::optional<double> tol;
    std::string mode = "float";
    std::string format = "table";
    std::string output;
    std::string source = "closed-form";
    std::string alpha0, gamma0;
    bool second_branch = false;
    bool inject_corruption = false;
    bool alpha_given = false;
};

int exit_code(ErrorKind k) {
    switch (k) {
    case ErrorKind::FamilyInapplicable:
    case ErrorKind::ConditionViolated:
    case ErrorKind::Irreducible:
    case ErrorKind::IrreducibleResidual:
    case ErrorKind::InvalidLowerParameter: return 2;
    case ErrorKind::ResonantIndex:
    case ErrorKind::DivisionByZero: return 3;
    case ErrorKind::NoConvergence:
    case ErrorKind::SlowConvergence:
    case ErrorKind::RootFindingStalled:
    case ErrorKind::StepUnderflow: return 4;
    case ErrorKind::DomainError:
    case ErrorKind::ApparentSingularity:
    case ErrorKind::PathViolation:
    case ErrorKind::ArgumentOutOfRange: return 5;
    case ErrorKind::VerificationFailed:
    case ErrorKind::NotTerminated: return 6;
    case ErrorKind::InvalidArgument:
    case ErrorKind::RequiresFloatingPoint: return 1;
    }
    return 1;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (const char c : s)
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

void emit_table(std::ostream& os, const Table& t, const std::string& format) {
    if (format == "csv") {
        for (std::size_t i = 0; i < t.header.size(); ++i)
            os << (i ? "," : "") << csv_field(t.header[i]);
        os << '\n';
        for (const auto& r : t.rows) {
            for (std::size_t i = 0; i < r.size(); ++i)
                os << (i ? "," : "") << csv_field(r[i]);
            os << '\n';
        }
        return;
    }
    std::vector<std::size_t> w(t.header.size(), 0);
    for (std::size_t i = 0; i < t.header.size(); ++i)
        w[i] = t.header[i].size();
    for (const auto& r : t.rows)
        for (std::size_t i = 0; i < r.size() && i < w.size(); ++i)
            w[i] = std::max(w[i], r[i].size());
    const auto line = [&](const std::vector<std::string>& r) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i + 1 < r.size())
                os << std::left << std::setw(static_cast<int>(w[i])) << r[i] << "  ";
            else
                os << r[i];
        }
        os << '\n';
    };
    line(t.header);
    for (const auto& r : t.rows)
        line(r);
}

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(6) << x;
    return os.str();
}

std::vector<Complex> parse_points(const Config& c) {
    std::vector<Complex> pts;
    if (!c.z.empty())
        pts.push_back(parse_complex(c.z));
    if (!c.z_grid.empty()) {
        const auto a = c.z_grid.find(':');
        const auto b = c.z_grid.rfind(':');
        if (a == std::string::npos || a == b)
            fail(ErrorKind::InvalidArgument, "--z-grid expects start:stop:count");
        const Complex start = parse_complex(c.z_grid.substr(0, a));
        const Complex stop = parse_complex(c.z_grid.substr(a + 1, b - a - 1));
        const long count = std::stol(c.z_grid.substr(b + 1));
        if (count < 1)
            fail(ErrorKind::InvalidArgument, "--z-grid count must be positive");
        for (long k = 0; k < count; ++k)
            pts.push_back(count == 1 ? start : start + (stop - start) * (static_cast<double>(k) / (count - 1)));
    }
    return pts;
}

Family parse_family_flag(const std::string& s) {
    const auto f = parse_family(s);
    if (!f)
        fail(ErrorKind::InvalidArgument, "unknown family '" + s + "'");
    return *f;
}

template <Scalar S>
DcheParams<S> read_params(const Config& c) {
    return {parse_scalar<S>(c.alpha), parse_scalar<S>(c.gamma), parse_scalar<S>(c.delta), parse_scalar<S>(c.epsilon),
            parse_scalar<S>(c.q)};
}

template <Scalar S>
FamilyOptions<S> read_options(const Config& c) {
    FamilyOptions<S> o;
    if (!c.alpha0.empty())
        o.alpha0 = parse_scalar<S>(c.alpha0);
    if (!c.gamma0.empty())
        o.gamma0 = parse_scalar<S>(c.gamma0);
    if (c.source == "engine")
        o.source = StencilSource::Engine;
    else if (c.source != "closed-form")
        fail(ErrorKind::InvalidArgument, "--source must be closed-form or engine");
    o.second_branch = c.second_branch;
    return o;
}

std::vector<std::string> stencil_names(int width) {
    switch (width) {
    case 3: return {"R", "Q", "P"};
    case 5: return {"T", "S", "R", "Q", "P"};
    case 7: return {"A", "B", "T", "S", "R", "Q", "P"};
    default: {
        std::vector<std::string> v;
        for (int i = 0; i < width; ++i)
            v.push_back("c" + std::to_string(i));
        return v;
    }
    }
}

template <Scalar S>
int cmd_coeffs(const Config& c, std::ostream& os) {
    const auto inst = make_family(read_params<S>(c), parse_family_flag(c.family), read_options<S>(c));
    const auto sol = compute_coefficients(inst, c.terms);
    const int width = sol.columns.empty() ? 0 : sol.window.second - sol.window.first + 1;
    const auto names = stencil_names(width);
    if (c.format == "json") {
        Json j = to_json(sol);
        j["stencil_names"] = width ? Json(names) : Json::array();
        os << j.dump(2) << '\n';
        return 0;
    }
    Table t;
    t.header = {"n", "a_n"};
    for (const auto& nm : names)
        if (width)
            t.header.push_back(nm + "_n");
    for (long n = 0; n <= sol.order(); ++n) {
        std::vector<std::string> r{std::to_string(n), to_string(sol.coefficients[n])};
        if (width)
            for (int j = sol.window.first; j <= sol.window.second; ++j)
                r.push_back(to_string(sol.columns[n].at(j)));
        t.rows.push_back(std::move(r));
    }
    emit_table(os, t, c.format);
    return 0;
}

template <Scalar S>
int cmd_eval(const Config& c, std::ostream& os) {
    const auto inst = make_family(read_params<S>(c), parse_family_flag(c.family), read_options<S>(c));
    const auto sol = compute_coefficients(inst, c.terms);
    const auto pts = parse_points(c);
    if (pts.empty())
        fail(ErrorKind::InvalidArgument, "eval needs --z or --z-grid");
    EvalOptions eo;
    eo.tol = c.tol.value_or(1e-14);
    const auto pc = convert_params<Complex>(inst.params);
    Json rows = Json::array();
    Table t{{"z", "u", "du", "d2u", "residual", "rel_residual", "terms", "converged"}, {}};
    for (const auto& z : pts) {
        const auto v = inst.target == Target::UEquation ? evaluate_u(sol, z, eo) : evaluate_mapped_u(sol, z, eo);
        const Complex res = dche_residual(pc, v.d[0], v.d[1], v.d[2], z);
        const double rel = relative_dche_residual(pc, v, z);
        rows.push_back(Json{{"z", to_json(z)},
                            {"u", to_json(v.d[0])},
                            {"du", to_json(v.d[1])},
                            {"d2u", to_json(v.d[2])},
                            {"residual", std::abs(res)},
                            {"rel_residual", rel},
                            {"terms", v.terms},
                            {"converged", v.converged}});
        t.rows.push_back({to_string(z), to_string(v.d[0]), to_string(v.d[1]), to_string(v.d[2]), fmt(std::abs(res)),
                          fmt(rel), std::to_string(v.terms), v.converged ? "yes" : "no"});
    }
    if (c.format == "json")
        os << Json{{"family", c.family}, {"points", rows}}.dump(2) << '\n';
    else
        emit_table(os, t, c.format);
    return 0;
}

/// alpha implied by the termination condition when --alpha is omitted.
template <Scalar S>
std::optional<S> implied_alpha(Family f, const DcheParams<S>& p, long N) {
    const S n(static_cast<long long>(N));
    switch (f) {
    case Family::ThreeTermA:
    case Family::ThreeTermDeg:
    case Family::FiveTerm: return -p.epsilon * n;
    case Family::ThreeTermC: return p.epsilon * (p.gamma + n);
    default: return std::nullopt;
    }
}

template <Scalar S>
int cmd_terminate(const Config& c, std::ostream& os) {
    const Family f = parse_family_flag(c.family);
    auto p = read_params<S>(c);
    std::string installed;
    if (!c.alpha_given) {
        if (const auto a = implied_alpha(f, p, c.order)) {
            p.alpha = *a;
            installed = "alpha = " + to_string(*a) + " installed from the termination condition";
        }
    }
    const auto sp = q_spectrum(f, p, c.order, read_options<S>(c), c.tol.value_or(1e-10));
    if (c.format == "json") {
        Json j = to_json(sp);
        j["parameters"] = params_to_json(p);
        if (!installed.empty())
            j["note"] = installed;
        os << j.dump(2) << '\n';
    } else {
        Table t{{"q", "multiplicity", "exact", "a_next", "a_next2", "residual", "certified", "form"}, {}};
        for (const auto& r : sp.roots)
            t.rows.push_back({to_string(r.q), std::to_string(r.multiplicity), r.exact.value_or(""), fmt(r.a_next),
                              fmt(r.a_next2), fmt(r.residual), r.certified ? "yes" : "no", r.form});
        if (c.format == "table") {
            os << "family " << to_string(f) << ", N = " << sp.N << ", condition " << sp.condition << '\n';
            os << "a_{N+1}(q) = " << sp.polynomial.to_string("q") << '\n';
            if (!installed.empty())
                os << installed << '\n';
        }
        emit_table(os, t, c.format);
    }
    if (sp.stalled) {
        std::cerr << "error: RootFindingStalled: best iterates reported uncertified\n";
        return 4;
    }
    return 0;
}

template <Scalar S>
int cmd_derive(const Config& c, std::ostream& os) {
    const Family f = parse_family_flag(c.family);
    auto opts = read_options<S>(c);
    const auto alpha0 = opts.alpha0;
    const auto gamma0 = opts.gamma0;
    // Overrides go straight onto the basis so that the engine, not the family
    // constructor, reports what breaks.
    if (f != Family::ThreeTermDeg)
        opts.gamma0.reset();
    opts.alpha0.reset();
    auto inst = make_family(read_params<S>(c), f, opts);
    if (alpha0)
        inst.basis.alpha0 = *alpha0;
    if (gamma0)
        inst.basis.gamma0 = *gamma0;
    const auto ode = family_ode(inst);
    const auto rep = derive_report(ode, inst.basis, 0, c.terms);
    const int width = rep.window ? rep.window->second - rep.window->first + 1 : 0;
    const auto names = stencil_names(width);

    if (c.format == "json") {
        Json entries = Json::array();
        for (const auto& e : rep.entries) {
            Json row = Json::array();
            if (e.row)
                for (const auto& x : e.row->entries)
                    row.push_back(x ? to_json(*x) : Json(nullptr));
            entries.push_back(Json{{"n", e.n},
                                   {"clearing_power", e.clearing_power},
                                   {"column", e.column ? stencil_to_json(*e.column) : Json(nullptr)},
                                   {"row", row},
                                   {"diagnostic", e.diagnostic}});
        }
        Json j{{"family", c.family},
               {"mode", scalar_traits<S>::name},
               {"ode", rep.ode},
               {"p2", ode.p2.to_string()},
               {"p1", ode.p1.to_string()},
               {"p0", ode.p0.to_string()},
               {"basis", rep.basis},
               {"window", rep.window ? Json::array({rep.window->first, rep.window->second}) : Json(nullptr)},
               {"row_names", width ? Json(names) : Json::array()},
               {"diagnostic", rep.diagnostic},
               {"entries", entries}};
        os << j.dump(2) << '\n';
    } else {
        if (c.format == "table") {
            os << rep.ode << ": (" << ode.p2.to_string() << ") u'' + (" << ode.p1.to_string() << ") u' + ("
               << ode.p0.to_string() << ") u = 0\n";
            os << "basis " << rep.basis << '\n';
            if (rep.window)
                os << "row n: sum_i entry_i * a_{n-i}, width " << width << '\n';
            if (!rep.diagnostic.empty())
                os << "diagnostic: " << rep.diagnostic << '\n';
        }
        Table t;
        t.header = {"n", "clearing"};
        for (int i = 0; i < width; ++i)
            t.header.push_back(names[i] + "_{n-" + std::to_string(i) + "}");
        t.header.push_back("diagnostic");
        for (const auto& e : rep.entries) {
            std::vector<std::string> r{std::to_string(e.n), "z^" + std::to_string(e.clearing_power)};
            for (int i = 0; i < width; ++i)
                r.push_back(e.row && e.row->entries[i] ? to_string(*e.row->entries[i]) : "");
            r.push_back(e.diagnostic);
            t.rows.push_back(std::move(r));
        }
        emit_table(os, t, c.format);
    }
    if (!rep.diagnostic.empty())
        return rep.diagnostic.find("division by zero") != std::string::npos ? 3 : 2;
    for (const auto& e : rep.entries)
        if (!e.diagnostic.empty())
            return e.diagnostic.find("division by zero") != std::string::npos ? 3 : 2;
    return 0;
}

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

template <Scalar S>
std::vector<Check> verify_checks(const Config& c) {
    const Family f = parse_family_flag(c.family);
    const auto opts = read_options<S>(c);
    const auto inst = make_family(read_params<S>(c), f, opts);
    std::vector<Check> out;

    if (f != Family::TwoTerm) {
        const auto rep = verify_against_closed_form<S>({inst}, 0, std::min<long>(c.terms, 10),
                                                       SevenTermLast::Derived);
        out.push_back({"stencil-equality", rep.passed(),
                       std::to_string(rep.comparisons) + " comparisons, " + std::to_string(rep.mismatches.size()) +
                           " mismatches" + (rep.failures.empty() ? "" : "; " + rep.failures.front())});
    }
    auto sol = compute_coefficients(inst, c.terms);
    if (f != Family::SevenTermV) {
        auto eng = inst;
        eng.source = inst.source == StencilSource::Engine ? StencilSource::ClosedForm : StencilSource::Engine;
        const auto other = compute_coefficients(eng, c.terms);
        double worst = 0.0;
        for (std::size_t n = 0; n < sol.coefficients.size(); ++n) {
            const S d = sol.coefficients[n] - other.coefficients[n];
            worst = std::max(worst, magnitude(d) / std::max(1.0, magnitude(sol.coefficients[n])));
        }
        out.push_back({"coefficient-cross-check", is_exact_v<S> ? worst == 0.0 : worst <= 1e-12,
                       "max relative difference " + fmt(worst)});
    }
    if (c.inject_corruption && sol.coefficients.size() > 1)
        sol.coefficients[1] += S(1) / S(1000);

    if (f != Family::TwoTerm) {
        double worst = 0.0;
        for (long n = 1; n <= sol.order(); ++n)
            worst = std::max(worst, magnitude(row_residual(sol, n)));
        out.push_back({"recurrence-rows", is_exact_v<S> ? worst == 0.0 : worst <= 1e-10,
                       "max |row residual| " + fmt(worst)});
    }

    auto pts = parse_points(c);
    if (pts.empty())
        for (int k = 0; k < 7; ++k)
            pts.emplace_back(0.5 + 0.25 * k, 0.0);
    EvalOptions eo;
    eo.require_convergence = false;
    double worst = 0.0;
    bool converged = true;
    const auto pc = convert_params<Complex>(inst.params);
    for (const auto& z : pts) {
        const auto v = inst.target == Target::UEquation ? evaluate_u(sol, z, eo) : evaluate_mapped_u(sol, z, eo);
        converged = converged && v.converged;
        worst = std::max(worst, relative_dche_residual(pc, v, z));
    }
    out.push_back({"dche-residual", worst <= 1e-8,
                   "max relative residual " + fmt(worst) + (converged ? "" : " (series not converged)")});

    if (!is_zero(inst.params.alpha) || !is_zero(inst.params.q)) {
        const auto veq = make_v_equation(inst.params);
        double rt = 0.0;
        bool ok = true;
        std::string note;
        for (const auto& z : pts) {
            try {
                const auto v = inst.target == Target::UEquation ? evaluate_u(sol, z, eo) : evaluate_mapped_u(sol, z, eo);
                const auto vt = v_triple_from_u(inst.params, v.d[0], v.d[1], z);
                const Complex back = map_v_to_u(veq, vt[1], z);
                rt = std::max(rt, std::abs(back - v.d[0]) / std::max(std::abs(v.d[0]), 1e-300));
            } catch (const Error& e) {
                ok = false;
                note = e.what();
            }
        }
        out.push_back({"v-roundtrip", ok && rt <= 1e-8, note.empty() ? "max relative deviation " + fmt(rt) : note});
    }

    const auto back = series_from_json<S>(to_json(sol));
    out.push_back({"json-roundtrip", to_json(back) == to_json(sol), "series record re-read"});
    return out;
}

template <Scalar S>
int cmd_verify(const Config& c, std::ostream& os) {
    const auto checks = verify_checks<S>(c);
    bool all = true;
    for (const auto& ch : checks)
        all = all && ch.passed;
    if (c.format == "json") {
        Json arr = Json::array();
        for (const auto& ch : checks)
            arr.push_back(Json{{"check", ch.name}, {"passed", ch.passed}, {"detail", ch.detail}});
        os << Json{{"family", c.family}, {"passed", all}, {"checks", arr}}.dump(2) << '\n';
    } else {
        Table t{{"check", "status", "detail"}, {}};
        for (const auto& ch : checks)
            t.rows.push_back({ch.name, ch.passed ? "PASS" : "FAIL", ch.detail});
        emit_table(os, t, c.format);
    }
    return all ? 0 : 6;
}

template <Scalar S>
int cmd_oracle(const Config& c, std::ostream& os) {
    const auto inst = make_family(read_params<S>(c), parse_family_flag(c.family), read_options<S>(c));
    const auto sol = compute_coefficients(inst, c.terms);
    if (c.z.empty() || c.z_grid.empty())
        fail(ErrorKind::InvalidArgument, "oracle-compare needs --z (anchor) and --z-grid (targets)");
    Config tc = c;
    tc.z.clear();
    const auto targets = parse_points(tc);
    const auto rep = compare_series_vs_integration(sol, parse_complex(c.z), targets, c.tol.value_or(1e-10));
    if (c.format == "json") {
        Json rows = Json::array();
        for (const auto& r : rep.rows)
            rows.push_back(Json{{"z", to_json(r.z)},
                                {"series", to_json(r.series)},
                                {"integrated", to_json(r.integrated)},
                                {"deviation", r.deviation},
                                {"integration_error", r.integration_error},
                                {"series_converged", r.series_converged}});
        os << Json{{"family", c.family},
                   {"anchor", to_json(rep.anchor)},
                   {"anchor_converged", rep.anchor_converged},
                   {"max_deviation", rep.max_deviation},
                   {"rows", rows}}
                  .dump(2)
           << '\n';
    } else {
        Table t{{"z", "series", "integrated", "deviation", "integration_error", "series_converged"}, {}};
        for (const auto& r : rep.rows)
            t.rows.push_back({to_string(r.z), to_string(r.series), to_string(r.integrated), fmt(r.deviation),
                              fmt(r.integration_error), r.series_converged ? "yes" : "no"});
        if (c.format == "table")
            os << "anchor " << to_string(rep.anchor) << (rep.anchor_converged ? "" : " (series not converged)")
               << ", max deviation " << fmt(rep.max_deviation) << '\n';
        emit_table(os, t, c.format);
    }
    return 0;
}

template <Scalar S>
int dispatch(const std::string& cmd, const Config& c, std::ostream& os) {
    if (cmd == "coeffs")
        return cmd_coeffs<S>(c, os);
    if (cmd == "eval")
        return cmd_eval<S>(c, os);
    if (cmd == "terminate")
        return cmd_terminate<S>(c, os);
    if (cmd == "derive")
        return cmd_derive<S>(c, os);
    if (cmd == "verify")
        return cmd_verify<S>(c, os);
    return cmd_oracle<S>(c, os);
}

void add_common(CLI::App* sub, Config& c) {
    sub->add_option("--alpha", c.alpha, "DCHE alpha (re, re,im or p/q)");
    sub->add_option("--gamma", c.gamma, "DCHE gamma");
    sub->add_option("--delta", c.delta, "DCHE delta");
    sub->add_option("--epsilon", c.epsilon, "DCHE epsilon");
    sub->add_option("--q", c.q, "accessory parameter q");
    sub->add_option("--family", c.family, "two-term, three-term-a, three-term-deg, five-term, three-term-c, seven-term-v");
    sub->add_option("--terms", c.terms, "truncation order M")->check(CLI::NonNegativeNumber);
    sub->add_option("--order", c.order, "termination order N")->check(CLI::NonNegativeNumber);
    sub->add_option("--z", c.z, "evaluation point (oracle-compare: anchor)");
    sub->add_option("--z-grid", c.z_grid, "start:stop:count");
    sub->add_option("--tol", c.tol, "series / integrator / certification tolerance");
    sub->add_option("--mode", c.mode, "float or exact")->check(CLI::IsMember({"float", "exact"}));
    sub->add_option("--format", c.format, kFormatHelp)->check(CLI::IsMember({"json", "csv", "table"}));
    sub->add_option("--output", c.output, "write to this file instead of standard output");
    sub->add_option("--source", c.source, "closed-form or engine stencils");
    sub->add_option("--alpha0", c.alpha0, "basis alpha0 where the family leaves a choice");
    sub->add_option("--gamma0", c.gamma0, "basis gamma0 where the family leaves a choice");
    sub->add_flag("--second-branch", c.second_branch, "three-term-deg: gamma0 = 1 - sqrt(...)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kummer-function series solutions of the double-confluent Heun equation\n"
                 "exit codes: 0 ok, 1 usage, 2 constraint, 3 resonance, 4 convergence, 5 domain, 6 verification"};
    app.require_subcommand(1);
    Config cfg;
    const std::vector<std::pair<std::string, std::string>> cmds{
        {"coeffs", "coefficient table a_0..a_M with the stencil entries used"},
        {"eval", "series value, derivatives and DCHE residual over z"},
        {"terminate", "accessory-parameter spectrum for termination at --order"},
        {"derive", "recurrence rows derived by the engine, with reducibility diagnostics"},
        {"verify", "property checks for one parameter draw"},
        {"oracle-compare", "series against direct integration seeded at --z"}};
    for (const auto& [name, desc] : cmds) {
        auto* sub = app.add_subcommand(name, desc);
        add_common(sub, cfg);
        if (name == "verify")
            sub->add_flag("--inject-corruption", cfg.inject_corruption, "perturb a_1 (test hook)")->group("");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    const std::string cmd = app.get_subcommands().front()->get_name();
    cfg.alpha_given = app.get_subcommands().front()->count("--alpha") > 0;

    std::ofstream file;
    if (!cfg.output.empty()) {
        file.open(cfg.output);
        if (!file) {
            std::cerr << "error: cannot open " << cfg.output << '\n';
            return 1;
        }
    }
    std::ostream& os = cfg.output.empty() ? std::cout : file;
    try {
        return cfg.mode == "exact" ? dispatch<Rational>(cmd, cfg, os) : dispatch<Complex>(cmd, cfg, os);
    } catch (const Error& e) {
        std::cerr << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
