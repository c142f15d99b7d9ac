#pragma once

#include "basis.hpp"
#include "closed_forms.hpp"
#include "error.hpp"
#include "family.hpp"
#include "params.hpp"
#include "recurrence_engine.hpp"
#include "scalar.hpp"
#include "special_functions.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dche {

/// a_0..a_M of one family instance, normalized to a_0 = 1.
template <Scalar S>
struct SeriesSolution {
    FamilyInstance<S> instance;
    std::vector<S> coefficients;
    /// Column entries c_j(n) used for row n; empty for closed-form two-term.
    std::vector<ShiftStencil<S>> columns;
    std::pair<int, int> window{0, 0};
    /// Set by the termination module once a_{N+1}.. are certified to vanish.
    std::optional<long> terminated_at;

    long order() const { return static_cast<long>(coefficients.size()) - 1; }
};

namespace detail {

template <Scalar S>
ShiftStencil<S> family_column(const FamilyInstance<S>& inst, const PolyOde<S>& ode, long n) {
    if (inst.source == StencilSource::ClosedForm && inst.family != Family::SevenTermV)
        return closed_form_stencil(inst, n);
    return derive_stencil(ode, inst.basis, n);
}

template <Scalar S>
bool vanishes(const S& x, double scale) {
    return negligible(x, scale, 1e-14);
}

/// Backward pass over the grouped both-shift rows of the reflected two-term
/// form: b_n C0(-n, z) + b_{n+1} C1(-n-1, z) = 0 for every power of z.
template <Scalar S>
std::vector<S> two_term_engine(const FamilyInstance<S>& inst, long M) {
    const auto ode = family_ode(inst);
    const auto top = derive_grouped_stencil(ode, inst.basis, 0);
    if (!top.at(1).is_zero())
        fail(ErrorKind::ConditionViolated, "two-term: u_0 feeds u_1; the series does not terminate on the right");
    std::vector<S> b{S(1)};
    for (long n = 0; n < M; ++n) {
        const auto c0 = derive_grouped_stencil(ode, inst.basis, -n).at(0);
        const auto c1 = derive_grouped_stencil(ode, inst.basis, -n - 1).at(1);
        if (c1.is_zero())
            fail(ErrorKind::ResonantIndex, "two-term: leading entry vanishes at n = " + std::to_string(n + 1));
        std::size_t pivot = 0;
        for (std::size_t k = 0; k < c1.coefficients().size(); ++k)
            if (magnitude(c1.coeff(k)) > magnitude(c1.coeff(pivot)))
                pivot = k;
        const S next = -b.back() * c0.coeff(pivot) / c1.coeff(pivot);
        const auto width = std::max(c0.coefficients().size(), c1.coefficients().size());
        for (std::size_t k = 0; k < width; ++k) {
            const S lhs = b.back() * c0.coeff(k);
            const S rhs = next * c1.coeff(k);
            if (!negligible(lhs + rhs, std::max(magnitude(lhs), magnitude(rhs))))
                fail(ErrorKind::IrreducibleResidual,
                     "two-term: z^" + std::to_string(k) + " rows inconsistent at n = " + std::to_string(n + 1));
        }
        b.push_back(next);
    }
    return b;
}

} // namespace detail

/// Coefficients from a_0 = 1 by forward substitution on the leading stencil
/// entry: c_lo(n) a_n = -sum_{i>=1} c_{lo+i}(n-i) a_{n-i}.
template <Scalar S>
SeriesSolution<S> compute_coefficients(const FamilyInstance<S>& inst, long M) {
    if (M < 0)
        fail(ErrorKind::InvalidArgument, "truncation order must be nonnegative");
    SeriesSolution<S> sol;
    sol.instance = inst;

    if (inst.family == Family::TwoTerm) {
        sol.window = {0, 1};
        if (inst.source == StencilSource::Engine) {
            sol.coefficients = detail::two_term_engine(inst, M);
        } else {
            sol.coefficients.push_back(S(1));
            const S lead = S(1) - inst.basis.gamma0;
            for (long n = 0; n < M; ++n) {
                const S sn(static_cast<long long>(n));
                sol.coefficients.push_back(sol.coefficients.back() * (lead + sn) / (sn + S(1)));
            }
        }
        return sol;
    }

    const auto ode = family_ode(inst);
    sol.window = inst.source == StencilSource::ClosedForm && inst.family != Family::SevenTermV
                     ? std::pair<int, int>{closed_form_offsets(inst.family).front(),
                                           closed_form_offsets(inst.family).back()}
                     : stencil_window(ode, inst.basis);
    const auto [lo, hi] = sol.window;
    const int width = hi - lo + 1;

    sol.columns.push_back(detail::family_column(inst, ode, 0));
    {
        double scale = 0.0;
        for (const auto& [j, c] : sol.columns[0].entries())
            scale = std::max(scale, magnitude(c));
        if (!detail::vanishes(sol.columns[0].at(lo), scale))
            fail(ErrorKind::ConditionViolated, std::string(to_string(inst.family)) +
                                                   ": leading entry is nonzero at n = 0; no left termination");
    }
    sol.coefficients.push_back(S(1));

    for (long n = 1; n <= M; ++n) {
        sol.columns.push_back(detail::family_column(inst, ode, n));
        S acc(0);
        for (int i = 1; i < width && n - i >= 0; ++i)
            acc += sol.columns[n - i].at(lo + i) * sol.coefficients[n - i];
        const S lead = sol.columns[n].at(lo);
        double lead_scale = 0.0;
        for (const auto& [j, c] : sol.columns[n].entries())
            lead_scale = std::max(lead_scale, magnitude(c));
        if (detail::vanishes(lead, lead_scale))
            fail(ErrorKind::ResonantIndex, std::string(to_string(inst.family)) +
                                               ": leading entry vanishes at n = " + std::to_string(n));
        sol.coefficients.push_back(-acc / lead);
    }
    return sol;
}

/// Row n of the recurrence evaluated on the stored coefficients.
template <Scalar S>
S row_residual(const SeriesSolution<S>& sol, long n) {
    const auto [lo, hi] = sol.window;
    S acc(0);
    for (int i = 0; i <= hi - lo && n - i >= 0; ++i)
        if (n - i < static_cast<long>(sol.columns.size()))
            acc += sol.columns[n - i].at(lo + i) * sol.coefficients[n - i];
    return acc;
}

/// a_n = (alpha0)_n/(gamma0)_n generated step by step from a_n = a_{n-1}
/// alpha_{n-1}/gamma_{n-1}.
template <Scalar S>
std::vector<S> two_term_ratio_recurrence(const S& alpha0, const S& gamma0, long M) {
    std::vector<S> a{S(1)};
    for (long n = 1; n <= M; ++n) {
        const S m(static_cast<long long>(n - 1));
        if (is_zero(gamma0 + m))
            fail(ErrorKind::DivisionByZero, "gamma_{n-1} vanishes at n = " + std::to_string(n));
        a.push_back(a.back() * (alpha0 + m) / (gamma0 + m));
    }
    return a;
}

struct EvalOptions {
    double tol = 1e-14;
    /// When false an unconverged sum is returned with converged = false.
    bool require_convergence = true;
    SeriesOptions kummer{};
};

/// Series value and derivatives; d[k] is the k-th derivative in z.
struct SeriesValue {
    std::array<Complex, 4> d{};
    double tail = 0.0;
    long terms = 0;
    bool converged = false;

    Complex u() const { return d[0]; }
};

namespace detail {

template <Scalar S>
SeriesValue sum_series(const SeriesSolution<S>& sol, const Complex& z, unsigned max_order, const EvalOptions& opt) {
    if (z == Complex{})
        fail(ErrorKind::DomainError, "series evaluation at z = 0");
    SeriesValue out;
    int small_run = 0;
    double last_term = 0.0;
    for (std::size_t n = 0; n < sol.coefficients.size(); ++n) {
        const Complex a = to_complex(sol.coefficients[n]);
        ++out.terms;
        double mag = 0.0;
        if (a != Complex{}) {
            const long m = sol.instance.basis_index(static_cast<long>(n));
            for (unsigned k = 0; k <= max_order; ++k) {
                const Complex t = a * basis_derivative(sol.instance.basis, m, z, k, opt.kummer);
                out.d[k] += t;
                if (k == 0)
                    mag = std::abs(t);
            }
        }
        last_term = mag;
        if (mag <= opt.tol * std::abs(out.d[0])) {
            if (++small_run == 3) {
                out.converged = true;
                break;
            }
        } else {
            small_run = 0;
        }
    }
    // A certified finite sum is complete once every stored term is added.
    if (!out.converged && sol.terminated_at)
        out.converged = true;
    out.tail = std::abs(out.d[0]) > 0.0 ? last_term / std::abs(out.d[0]) : last_term;
    if (out.converged)
        out.tail = std::min(out.tail, opt.tol);
    if (!out.converged && opt.require_convergence)
        fail(ErrorKind::SlowConvergence, "series not converged after " + std::to_string(out.terms) +
                                             " terms; relative tail " + std::to_string(out.tail));
    return out;
}

} // namespace detail

/// u, u', u'' of a u-equation series.
template <Scalar S>
SeriesValue evaluate_u(const SeriesSolution<S>& sol, const Complex& z, const EvalOptions& opt = {}) {
    if (sol.instance.target != Target::UEquation)
        fail(ErrorKind::InvalidArgument, "v-equation series: use evaluate_v or evaluate_mapped_u");
    return detail::sum_series(sol, z, 2, opt);
}

/// v, v', v'', v''' of a v-equation series.
template <Scalar S>
SeriesValue evaluate_v(const SeriesSolution<S>& sol, const Complex& z, const EvalOptions& opt = {}) {
    if (sol.instance.target != Target::VEquation)
        fail(ErrorKind::InvalidArgument, "u-equation series: use evaluate_u");
    return detail::sum_series(sol, z, 3, opt);
}

/// The v-equation with its apparent singularity z0 = q/alpha.
struct VEquation {
    DcheParams<Complex> params;
    std::optional<Complex> z0;
    std::string coincidence;
};

template <Scalar S>
VEquation make_v_equation(const DcheParams<S>& p) {
    VEquation v{convert_params<Complex>(p), std::nullopt, {}};
    if (is_zero(p.alpha)) {
        v.coincidence = "alpha = 0: z0 moves to infinity; reduces to a DCHE with altered parameters";
    } else {
        v.z0 = to_complex(p.q / p.alpha);
        if (is_zero(p.q))
            v.coincidence = "q = 0: z0 coincides with z = 0; reduces to a DCHE with altered parameters";
    }
    return v;
}

/// v = z^gamma exp(eps z - delta/z) u'.
template <Scalar S>
Complex v_from_u(const DcheParams<S>& p, const Complex& du, const Complex& z) {
    if (z == Complex{})
        fail(ErrorKind::DomainError, "v_from_u at z = 0");
    const auto c = convert_params<Complex>(p);
    return std::pow(z, c.gamma) * std::exp(c.epsilon * z - c.delta / z) * du;
}

namespace detail {

inline void check_map_point(const VEquation& veq, const Complex& z) {
    if (z == Complex{})
        fail(ErrorKind::DomainError, "map_v_to_u at z = 0");
    const auto& p = veq.params;
    const Complex denom = p.alpha * z - p.q;
    if (std::abs(denom) <= 1e-14 * std::max({1.0, std::abs(p.alpha * z), std::abs(p.q)}))
        fail(ErrorKind::ApparentSingularity, "z coincides with the apparent singularity z0 = q/alpha");
}

/// K(z) = -z^(2-gamma) exp(-eps z + delta/z)/(alpha z - q) and L = K'/K.
inline std::pair<Complex, Complex> map_factor(const VEquation& veq, const Complex& z) {
    const auto& p = veq.params;
    const Complex denom = p.alpha * z - p.q;
    const Complex k = -std::pow(z, 2.0 - p.gamma) * std::exp(-p.epsilon * z + p.delta / z) / denom;
    const Complex l = (2.0 - p.gamma) / z - p.epsilon - p.delta / (z * z) - p.alpha / denom;
    return {k, l};
}

} // namespace detail

/// u = -z^(2-gamma) exp(-eps z + delta/z)/(alpha z - q) v'.
inline Complex map_v_to_u(const VEquation& veq, const Complex& dv, const Complex& z) {
    detail::check_map_point(veq, z);
    return detail::map_factor(veq, z).first * dv;
}

/// u, u', u'' obtained by mapping a v-series term by term; u' and u'' use
/// v'' and v''' rather than the DCHE, so the DCHE residual is a real test.
template <Scalar S>
SeriesValue evaluate_mapped_u(const SeriesSolution<S>& sol, const Complex& z, const EvalOptions& opt = {}) {
    const auto veq = make_v_equation(sol.instance.params);
    detail::check_map_point(veq, z);
    const SeriesValue v = evaluate_v(sol, z, opt);
    const auto& p = veq.params;
    const auto [k, l] = detail::map_factor(veq, z);
    const Complex denom = p.alpha * z - p.q;
    const Complex dl = -(2.0 - p.gamma) / (z * z) + 2.0 * p.delta / (z * z * z) + p.alpha * p.alpha / (denom * denom);
    SeriesValue u = v;
    u.d[0] = k * v.d[1];
    u.d[1] = k * (l * v.d[1] + v.d[2]);
    u.d[2] = k * ((l * l + dl) * v.d[1] + 2.0 * l * v.d[2] + v.d[3]);
    u.d[3] = Complex{};
    return u;
}

/// z^s 1F1(s + alpha/eps; gamma0; -eps z) with gamma0 = 1 +- sqrt((1-gamma)^2 + 4q)
/// and s = (gamma0 - gamma)/2, for delta = 0. Returns u, u', u''.
template <Scalar S>
SeriesValue degenerate_closed_form(const DcheParams<S>& params, const Complex& z, bool second_branch = false,
                                   const SeriesOptions& opt = {}) {
    if (!is_zero(params.delta))
        fail(ErrorKind::FamilyInapplicable, "closed form requires δ = 0");
    if (is_zero(params.epsilon))
        fail(ErrorKind::FamilyInapplicable, "ε must be nonzero");
    if (z == Complex{})
        fail(ErrorKind::DomainError, "closed form at z = 0");
    const auto p = convert_params<Complex>(params);
    const Complex root = std::sqrt((1.0 - p.gamma) * (1.0 - p.gamma) + 4.0 * p.q);
    const Complex g0 = second_branch ? 1.0 - root : 1.0 + root;
    if (is_nonpositive_integer(g0))
        fail(ErrorKind::InvalidLowerParameter, "gamma0 = " + to_string(g0) + " is a nonpositive integer");
    const Complex s = (g0 - p.gamma) / 2.0;
    const Complex a = s + p.alpha / p.epsilon;
    const Complex x = -p.epsilon * z;
    std::array<Complex, 3> m{};
    for (unsigned k = 0; k < 3; ++k)
        m[k] = std::pow(-p.epsilon, static_cast<int>(k)) * kummer_m_diff(KummerArgs<Complex>{a, g0, x}, k, opt);
    const Complex zs = std::pow(z, s);
    SeriesValue out;
    out.d[0] = zs * m[0];
    out.d[1] = zs * (s / z * m[0] + m[1]);
    out.d[2] = zs * (s * (s - 1.0) / (z * z) * m[0] + 2.0 * s / z * m[1] + m[2]);
    out.converged = true;
    return out;
}

} // namespace dche
