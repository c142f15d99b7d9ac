#pragma once

#include "closed_forms.hpp"
#include "error.hpp"
#include "expansions.hpp"
#include "family.hpp"
#include "polynomial.hpp"
#include "residual.hpp"
#include "roots.hpp"
#include "scalar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace dche {

struct TerminationCondition {
    Family family = Family::ThreeTermA;
    long N = 0;
    std::string constraint;
    /// The top stencil entry at index N vanishes.
    bool satisfied = false;
};

namespace detail {

template <Scalar S>
std::string termination_constraint(const FamilyInstance<S>& inst) {
    const auto& p = inst.params;
    switch (inst.family) {
    case Family::ThreeTermA: return "α/ε = −N";
    case Family::ThreeTermDeg:
        return same_value(inst.basis.alpha0, p.alpha / p.epsilon) ? "α/ε = −N or γ − γ₀ = −N" : "γ − α/ε = −N";
    case Family::FiveTerm: return "γ₀ = γ + N or α = −εN or α = −ε(N+1)";
    case Family::ThreeTermC: return "γ − α/ε = −N";
    case Family::SevenTermV: return "α₀ + N ∈ {0, −1, −2, γ₀ + γ − α/ε − 1}";
    case Family::TwoTerm: break;
    }
    return "terminates by construction";
}

template <Scalar S>
ShiftStencil<S> column_for(const FamilyInstance<S>& inst, long n) {
    return family_column(inst, family_ode(inst), n);
}

template <Scalar S>
int top_offset(const FamilyInstance<S>& inst) {
    if (inst.source == StencilSource::ClosedForm && inst.family != Family::SevenTermV)
        return closed_form_offsets(inst.family).back();
    return stencil_window(family_ode(inst), inst.basis).second;
}

template <Scalar S>
std::pair<int, int> window_for(const FamilyInstance<S>& inst) {
    if (inst.source == StencilSource::ClosedForm && inst.family != Family::SevenTermV)
        return {closed_form_offsets(inst.family).front(), closed_form_offsets(inst.family).back()};
    return stencil_window(family_ode(inst), inst.basis);
}

} // namespace detail

/// Whether the top stencil entry vanishes at index N.
template <Scalar S>
TerminationCondition termination_condition(const FamilyInstance<S>& inst, long N) {
    if (inst.family == Family::TwoTerm)
        fail(ErrorKind::InvalidArgument, "two-term: the polynomial form has no right-termination condition");
    TerminationCondition tc{inst.family, N, detail::termination_constraint(inst), false};
    const auto col = detail::column_for(inst, N);
    double scale = 0.0;
    for (const auto& [j, c] : col.entries())
        scale = std::max(scale, magnitude(c));
    tc.satisfied = negligible(col.at(detail::top_offset(inst)), scale, 1e-14);
    return tc;
}

/// a_0(q)..a_{N+1}(q) as polynomials in q.
template <Scalar S>
struct QPolynomial {
    Family family = Family::ThreeTermA;
    long N = 0;
    std::vector<Polynomial<S>> coefficients;

    const Polynomial<S>& terminal() const { return coefficients.back(); }
};

/// Runs the recurrence with a_n represented as polynomials in q. Every
/// stencil entry is affine in q (checked on three values of q) and the
/// leading entry must be q-free, so division keeps the a_n polynomial.
template <Scalar S>
QPolynomial<S> q_polynomial(Family f, const DcheParams<S>& params, long N, const FamilyOptions<S>& opt = {}) {
    if (N < 0)
        fail(ErrorKind::InvalidArgument, "termination order must be nonnegative");
    if (f == Family::TwoTerm || f == Family::SevenTermV)
        fail(ErrorKind::InvalidArgument,
             std::string(to_string(f)) + ": q enters non-affinely or is fixed; no accessory-parameter spectrum");
    if (f == Family::ThreeTermDeg && !opt.gamma0)
        fail(ErrorKind::InvalidArgument, "three-term-deg: the default γ₀ depends on q; pass γ₀ explicitly");

    std::array<FamilyInstance<S>, 3> inst{make_family(params.with_q(S(0)), f, opt),
                                          make_family(params.with_q(S(1)), f, opt),
                                          make_family(params.with_q(S(2)), f, opt)};
    const auto tc = termination_condition(inst[0], N);
    if (!tc.satisfied)
        fail(ErrorKind::ConditionViolated, std::string(to_string(f)) + ": termination at N = " + std::to_string(N) +
                                               " requires " + tc.constraint);

    const auto [lo, hi] = detail::window_for(inst[0]);
    const int width = hi - lo + 1;
    std::vector<std::map<int, Polynomial<S>>> cols;
    for (long n = 0; n <= N + 1; ++n) {
        const auto c0 = detail::column_for(inst[0], n);
        const auto c1 = detail::column_for(inst[1], n);
        const auto c2 = detail::column_for(inst[2], n);
        std::map<int, Polynomial<S>> col;
        for (int j = lo; j <= hi; ++j) {
            const S a = c0.at(j);
            const S b = c1.at(j) - a;
            const S curvature = c2.at(j) - a - S(2) * b;
            if (!negligible(curvature, std::max({magnitude(a), magnitude(b), 1.0})))
                fail(ErrorKind::InvalidArgument, "stencil entry is not affine in q");
            col[j] = Polynomial<S>{a, b};
        }
        cols.push_back(std::move(col));
    }
    QPolynomial<S> out{f, N, {Polynomial<S>::constant(S(1))}};
    for (long n = 1; n <= N + 1; ++n) {
        const auto& lead = cols[n].at(lo);
        if (lead.degree() > 0)
            fail(ErrorKind::ConditionViolated, "leading stencil entry depends on q");
        if (lead.is_zero())
            fail(ErrorKind::ResonantIndex,
                 std::string(to_string(f)) + ": leading entry vanishes at n = " + std::to_string(n));
        Polynomial<S> acc;
        for (int i = 1; i < width && n - i >= 0; ++i)
            acc += cols[n - i].at(lo + i) * out.coefficients[n - i];
        out.coefficients.push_back(acc * (S(-1) / lead.coeff(0)));
    }
    return out;
}

/// u = plain(z) + exp(exponent z) * exp_part(z).
template <Scalar S>
struct QuasiPolynomial {
    Polynomial<S> plain;
    Polynomial<S> exp_part;
    S exponent{0};

    /// u, u', u''.
    std::array<Complex, 3> evaluate(const Complex& z) const {
        const Complex c = to_complex(exponent);
        const auto p1 = plain.derivative();
        const auto q1 = exp_part.derivative();
        const Complex q0v = exp_part(z), q1v = q1(z), q2v = q1.derivative()(z);
        const Complex e = std::exp(c * z);
        return {plain(z) + e * q0v, p1(z) + e * (q1v + c * q0v),
                p1.derivative()(z) + e * (q2v + 2.0 * c * q1v + c * c * q0v)};
    }

    std::string to_string() const {
        std::string s;
        if (!plain.is_zero())
            s = plain.to_string();
        if (!exp_part.is_zero()) {
            if (!s.empty())
                s += " + ";
            s += "exp((" + dche::to_string(exponent) + ") z) * [" + exp_part.to_string() + "]";
        }
        return s.empty() ? "0" : s;
    }
};

namespace detail {

/// 1F1(a; b; x) with x = s0 z as a polynomial, or exp(s0 z) times a
/// polynomial via the Kummer transformation, when either sum terminates.
template <Scalar S>
std::optional<QuasiPolynomial<S>> kummer_as_quasi_polynomial(const S& a, const S& b, const S& s0) {
    const auto expand = [&](const S& up, const S& s) {
        const long long m = -*integer_value(up);
        std::vector<S> c{S(1)};
        S term(1);
        for (long long j = 0; j < m; ++j) {
            const S sj(j);
            if (is_zero(b + sj))
                fail(ErrorKind::InvalidLowerParameter, "lower parameter hits a pole in a terminating sum");
            term *= (up + sj) * s / ((b + sj) * S(j + 1));
            c.push_back(term);
        }
        return Polynomial<S>(std::move(c));
    };
    if (is_nonpositive_integer(a))
        return QuasiPolynomial<S>{expand(a, s0), {}, s0};
    if (is_nonpositive_integer(b - a))
        return QuasiPolynomial<S>{{}, expand(b - a, -s0), s0};
    return std::nullopt;
}

/// z^2 u'' + (eps z^2 + gamma z + delta) u' + (alpha z - q) u for
/// u = plain and for u = exp(c z) exp_part, returned as the two polynomial
/// factors (the exponential factor is stripped from the second).
template <Scalar S>
std::pair<Polynomial<S>, Polynomial<S>> quasi_residual(const DcheParams<S>& p, const QuasiPolynomial<S>& f) {
    const Polynomial<S> z2{S(0), S(0), S(1)};
    const Polynomial<S> B{p.delta, p.gamma, p.epsilon};
    const Polynomial<S> C{-p.q, p.alpha};
    const auto& P = f.plain;
    const auto& Q = f.exp_part;
    const S c = f.exponent;
    const auto r_plain = z2 * P.derivative().derivative() + B * P.derivative() + C * P;
    const auto q1 = Q.derivative();
    const auto r_exp = z2 * (q1.derivative() + q1 * (S(2) * c) + Q * (c * c)) + B * (q1 + Q * c) + C * Q;
    return {r_plain, r_exp};
}

} // namespace detail

template <Scalar S>
struct FiniteSumCertificate {
    SeriesSolution<S> solution;
    long N = 0;
    /// |a_{N+k}| / max|a_n| for k = 1..width-1.
    std::vector<double> tail;
    bool terminated = false;
    std::optional<QuasiPolynomial<S>> form;
    /// Residual of the explicit form vanishes identically.
    std::optional<bool> exact_residual_zero;
    /// Largest relative DCHE residual of the finite sum at the sample points.
    double max_residual = std::numeric_limits<double>::quiet_NaN();
    std::string diagnostics;
};

inline std::vector<Complex> default_sample_points() {
    std::vector<Complex> z;
    for (int k = 0; k < 20; ++k)
        z.emplace_back(0.5 + 1.5 * k / 19.0, 0.0);
    return z;
}

/// Builds the finite sum a_0..a_N, checks that a_{N+1}.. vanish, converts it
/// to explicit form where every basis function terminates and evaluates the
/// DCHE residual. Throws NotTerminated unless `diagnose_only`.
template <Scalar S>
FiniteSumCertificate<S> certify_finite_sum(const FamilyInstance<S>& inst, long N,
                                           const std::vector<Complex>& samples = default_sample_points(),
                                           bool diagnose_only = false) {
    if (inst.family == Family::TwoTerm)
        fail(ErrorKind::InvalidArgument, "two-term: use compute_coefficients; the polynomial form is not finite");
    FiniteSumCertificate<S> cert;
    cert.N = N;
    const auto [lo, hi] = detail::window_for(inst);
    const long extra = hi - lo;
    auto full = compute_coefficients(inst, N + extra);
    double amax = 0.0;
    for (const auto& a : full.coefficients)
        amax = std::max(amax, magnitude(a));
    cert.terminated = true;
    for (long k = 1; k <= extra; ++k) {
        const S& a = full.coefficients[N + k];
        cert.tail.push_back(magnitude(a) / amax);
        const bool zero = is_exact_v<S> ? is_zero(a) : cert.tail.back() <= 1e-12;
        if (!zero) {
            cert.terminated = false;
            cert.diagnostics += "a_" + std::to_string(N + k) + " = " + to_string(a) + "; ";
        }
    }
    cert.solution = full;
    cert.solution.coefficients.resize(N + 1);
    cert.solution.columns.resize(std::min<std::size_t>(full.columns.size(), N + 1));
    if (cert.terminated)
        cert.solution.terminated_at = N;

    if (inst.target == Target::UEquation) {
        QuasiPolynomial<S> sum{{}, {}, inst.basis.s0};
        bool explicit_form = true;
        for (long n = 0; n <= N && explicit_form; ++n) {
            const S& a = cert.solution.coefficients[n];
            if (is_zero(a))
                continue;
            const auto f = detail::kummer_as_quasi_polynomial(inst.basis.alpha(n), inst.basis.gamma(n), inst.basis.s0);
            if (!f) {
                explicit_form = false;
                break;
            }
            sum.plain += f->plain * a;
            sum.exp_part += f->exp_part * a;
        }
        if (explicit_form) {
            cert.form = sum;
            const auto [rp, re] = detail::quasi_residual(inst.params, sum);
            if constexpr (is_exact_v<S>) {
                cert.exact_residual_zero = rp.is_zero() && re.is_zero();
            } else {
                double scale = 0.0;
                for (const auto& c : sum.plain.coefficients())
                    scale = std::max(scale, magnitude(c));
                for (const auto& c : sum.exp_part.coefficients())
                    scale = std::max(scale, magnitude(c));
                bool zero = true;
                for (const auto& c : rp.coefficients())
                    zero = zero && negligible(c, scale, 1e-10);
                for (const auto& c : re.coefficients())
                    zero = zero && negligible(c, scale, 1e-10);
                cert.exact_residual_zero = zero;
            }
        }
    }

    EvalOptions eo;
    eo.require_convergence = false;
    cert.max_residual = 0.0;
    const auto pc = convert_params<Complex>(inst.params);
    for (const auto& z : samples) {
        const SeriesValue v = inst.target == Target::UEquation ? evaluate_u(cert.solution, z, eo)
                                                               : evaluate_mapped_u(cert.solution, z, eo);
        cert.max_residual = std::max(cert.max_residual, relative_dche_residual(pc, v, z));
    }
    if (!cert.terminated && !diagnose_only)
        fail(ErrorKind::NotTerminated, std::string(to_string(inst.family)) + ": finite sum at N = " +
                                           std::to_string(N) + " does not terminate: " + cert.diagnostics);
    return cert;
}

struct RootCertificate {
    Complex q;
    unsigned multiplicity = 1;
    std::optional<std::string> exact;
    double a_next = std::numeric_limits<double>::quiet_NaN();
    double a_next2 = std::numeric_limits<double>::quiet_NaN();
    double residual = std::numeric_limits<double>::quiet_NaN();
    std::optional<bool> exact_residual_zero;
    std::string form;
    bool certified = false;
    std::string note;
};

template <Scalar S>
struct QSpectrum {
    Family family = Family::ThreeTermA;
    long N = 0;
    std::string condition;
    Polynomial<S> polynomial;
    std::vector<RootCertificate> roots;
    std::string method;
    bool stalled = false;

    std::size_t root_count() const {
        std::size_t n = 0;
        for (const auto& r : roots)
            n += r.multiplicity;
        return n;
    }
};

namespace detail {

template <Scalar S>
void fill_certificate(RootCertificate& rc, const FiniteSumCertificate<S>& c, double tol) {
    rc.a_next = c.tail.size() > 0 ? c.tail[0] : 0.0;
    rc.a_next2 = c.tail.size() > 1 ? c.tail[1] : 0.0;
    rc.residual = c.max_residual;
    rc.exact_residual_zero = c.exact_residual_zero;
    if (c.form)
        rc.form = c.form->to_string();
    rc.certified = c.terminated && c.max_residual <= tol;
    if (!c.diagnostics.empty())
        rc.note = c.diagnostics;
}

} // namespace detail

/// Accessory-parameter values q for which the series terminates at N, each
/// with a certificate from re-running the recurrence at that q.
template <Scalar S>
QSpectrum<S> q_spectrum(Family f, const DcheParams<S>& params, long N, const FamilyOptions<S>& opt = {},
                        double tol = 1e-10, const RootOptions& ropt = {}) {
    const auto qp = q_polynomial(f, params, N, opt);
    QSpectrum<S> out;
    out.family = f;
    out.N = N;
    out.polynomial = qp.terminal();
    out.condition = detail::termination_constraint(make_family(params.with_q(S(0)), f, opt));

    std::vector<Complex> c;
    for (const auto& x : out.polynomial.coefficients())
        c.push_back(to_complex(x));
    if (out.polynomial.degree() < 1) {
        out.method = "none";
        return out;
    }
    const auto roots = polynomial_roots(c, ropt);
    out.method = roots.method;
    out.stalled = !roots.converged;
    for (const auto& cl : roots.roots) {
        RootCertificate rc;
        rc.q = cl.value;
        rc.multiplicity = cl.multiplicity;
        try {
            bool done = false;
            if constexpr (is_exact_v<S>) {
                if (std::abs(cl.value.imag()) <= 1e-9 * (1.0 + std::abs(cl.value))) {
                    if (const auto r = rational_candidate(cl.value.real()); r && is_zero(out.polynomial(*r))) {
                        rc.exact = r->str();
                        rc.q = to_complex(*r);
                        const auto cert = certify_finite_sum(make_family(params.with_q(*r), f, opt), N,
                                                             default_sample_points(), true);
                        detail::fill_certificate(rc, cert, tol);
                        rc.certified = rc.certified && cert.exact_residual_zero.value_or(true);
                        done = true;
                    }
                }
            }
            if (!done) {
                auto fopt = FamilyOptions<Complex>{};
                if (opt.alpha0)
                    fopt.alpha0 = to_complex(*opt.alpha0);
                if (opt.gamma0)
                    fopt.gamma0 = to_complex(*opt.gamma0);
                fopt.source = opt.source;
                auto pc = convert_params<Complex>(params);
                pc.q = rc.q;
                const auto cert = certify_finite_sum(make_family(pc, f, fopt), N, default_sample_points(), true);
                detail::fill_certificate(rc, cert, tol);
            }
        } catch (const Error& e) {
            rc.certified = false;
            rc.note = e.what();
        }
        if (out.stalled) {
            rc.certified = false;
            rc.note = "root finding stalled; best iterate reported";
        }
        out.roots.push_back(std::move(rc));
    }
    return out;
}

/// The conditions a_{N+1} = ... = a_{N+width-1} = 0 that right termination
/// needs beyond the top stencil entry vanishing; reported, never solved.
template <Scalar S>
struct RightTerminationReport {
    TerminationCondition condition;
    std::vector<std::pair<std::string, S>> conditions;

    bool all_satisfied() const {
        return condition.satisfied &&
               std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return is_zero(c.second); });
    }
};

template <Scalar S>
RightTerminationReport<S> right_termination_report(const FamilyInstance<S>& inst, long N) {
    RightTerminationReport<S> rep{termination_condition(inst, N), {}};
    const auto [lo, hi] = detail::window_for(inst);
    const auto sol = compute_coefficients(inst, N + (hi - lo));
    for (long k = 1; k <= hi - lo; ++k)
        rep.conditions.emplace_back("a_" + std::to_string(N + k), sol.coefficients[N + k]);
    return rep;
}

} // namespace dche
