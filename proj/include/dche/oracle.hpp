#pragma once

// Reference values by direct integration along straight complex paths,
// independent of any series machinery.

#include "error.hpp"
#include "expansions.hpp"
#include "params.hpp"
#include "recurrence_engine.hpp"
#include "residual.hpp"
#include "scalar.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace dche {

struct IvpSpec {
    PolyOde<Complex> ode;
    Complex z_a;
    Complex u_a;
    Complex du_a;
    Complex z_b;
    double tol = 1e-10;
    /// Minimum distance kept from 0 and from the apparent singularity.
    double clearance = 1e-3;
    std::size_t max_steps = 1000000;
};

struct IvpResult {
    Complex u;
    Complex du;
    /// |difference| to a re-run at half the tolerance, relative to |u|.
    double error_estimate = 0.0;
    std::size_t steps = 0;
};

template <Scalar S>
IvpSpec dche_ivp(const DcheParams<S>& p, const Complex& z_a, const Complex& u_a, const Complex& du_a,
                 const Complex& z_b, double tol = 1e-10) {
    return {dche_ode(convert_params<Complex>(p)), z_a, u_a, du_a, z_b, tol};
}

template <Scalar S>
IvpSpec v_equation_ivp(const DcheParams<S>& p, const Complex& z_a, const Complex& v_a, const Complex& dv_a,
                       const Complex& z_b, double tol = 1e-10) {
    return {v_equation_ode(convert_params<Complex>(p)), z_a, v_a, dv_a, z_b, tol};
}

namespace detail {

using OdeState = std::array<Complex, 2>;

inline double distance_to_segment(const Complex& p, const Complex& a, const Complex& b) {
    const Complex d = b - a;
    const double len2 = std::norm(d);
    if (len2 == 0.0)
        return std::abs(p - a);
    const double t = std::clamp(((p - a) * std::conj(d)).real() / len2, 0.0, 1.0);
    return std::abs(p - (a + t * d));
}

inline void check_path(const IvpSpec& spec) {
    std::vector<Complex> singular{Complex{}};
    if (spec.ode.apparent_singularity)
        singular.push_back(*spec.ode.apparent_singularity);
    for (const auto& s : singular)
        if (distance_to_segment(s, spec.z_a, spec.z_b) < spec.clearance)
            fail(ErrorKind::PathViolation, "integration path passes within " + std::to_string(spec.clearance) +
                                               " of the singular point " + to_string(s));
}

inline IvpResult integrate_once(const IvpSpec& spec, double tol) {
    namespace ode = boost::numeric::odeint;
    const Complex dz = spec.z_b - spec.z_a;
    const auto rhs = [&](const OdeState& y, OdeState& dydt, double t) {
        const Complex z = spec.z_a + t * dz;
        const Complex p2 = spec.ode.p2(z);
        dydt[0] = dz * y[1];
        dydt[1] = -dz * (spec.ode.p1(z) * y[1] + spec.ode.p0(z) * y[0]) / p2;
    };
    auto stepper = ode::make_controlled<ode::runge_kutta_dopri5<OdeState>>(tol, tol);
    OdeState y{spec.u_a, spec.du_a};
    double t = 0.0;
    double dt = 1e-3;
    IvpResult out;
    while (t < 1.0) {
        if (out.steps++ > spec.max_steps)
            fail(ErrorKind::StepUnderflow, "step budget exhausted at t = " + std::to_string(t));
        dt = std::min(dt, 1.0 - t);
        if (stepper.try_step(rhs, y, t, dt) == ode::fail) {
            if (dt < 1e-14)
                fail(ErrorKind::StepUnderflow, "step size underflow at z = " + to_string(spec.z_a + t * dz));
        }
    }
    out.u = y[0];
    out.du = y[1];
    return out;
}

} // namespace detail

/// Adaptive Dormand-Prince 5(4) on (u, u') along z_a -> z_b.
inline IvpResult integrate(const IvpSpec& spec) {
    if (spec.z_a == spec.z_b)
        return {spec.u_a, spec.du_a, 0.0, 0};
    detail::check_path(spec);
    auto main = detail::integrate_once(spec, spec.tol);
    const auto fine = detail::integrate_once(spec, spec.tol / 2.0);
    const double scale = std::max(std::abs(main.u), 1e-300);
    main.error_estimate = std::abs(main.u - fine.u) / scale;
    return main;
}

/// v, v', v'' from u, u' via v = z^gamma exp(eps z - delta/z) u', using the
/// DCHE for u'' and its derivative for u'''.
template <Scalar S>
std::array<Complex, 3> v_triple_from_u(const DcheParams<S>& params, const Complex& u, const Complex& du,
                                       const Complex& z) {
    const auto p = convert_params<Complex>(params);
    const Complex z2 = z * z, z3 = z2 * z;
    const Complex b = (p.delta + p.gamma * z + p.epsilon * z2) / z2;
    const Complex db = -2.0 * p.delta / z3 - p.gamma / z2;
    const Complex c = (p.alpha * z - p.q) / z2;
    const Complex dc = -p.alpha / z2 + 2.0 * p.q / z3;
    const Complex d2u = -b * du - c * u;
    const Complex d3u = -db * du - b * d2u - dc * u - c * du;
    const Complex g = v_from_u(params, Complex(1.0), z);
    const Complex h = p.gamma / z + p.epsilon + p.delta / z2;
    const Complex dh = -p.gamma / z2 - 2.0 * p.delta / z3;
    const Complex dg = g * h;
    const Complex d2g = g * (h * h + dh);
    return {g * du, dg * du + g * d2u, d2g * du + 2.0 * dg * d2u + g * d3u};
}

struct ComparisonRow {
    Complex z;
    Complex series;
    Complex integrated;
    double deviation = 0.0;
    double integration_error = 0.0;
    bool series_converged = false;
};

struct ComparisonReport {
    Complex anchor;
    bool anchor_converged = false;
    std::vector<ComparisonRow> rows;
    double max_deviation = 0.0;
};

/// Seeds the DCHE integration with the series (u, u') at the anchor and
/// compares with the series at each target.
template <Scalar S>
ComparisonReport compare_series_vs_integration(const SeriesSolution<S>& sol, const Complex& z_anchor,
                                               const std::vector<Complex>& targets, double tol = 1e-10,
                                               const EvalOptions& eval = {}) {
    EvalOptions eo = eval;
    eo.require_convergence = false;
    const auto value = [&](const Complex& z) {
        return sol.instance.target == Target::UEquation ? evaluate_u(sol, z, eo) : evaluate_mapped_u(sol, z, eo);
    };
    ComparisonReport rep;
    rep.anchor = z_anchor;
    const auto seed = value(z_anchor);
    rep.anchor_converged = seed.converged;
    for (const auto& zt : targets) {
        ComparisonRow row;
        row.z = zt;
        const auto ser = value(zt);
        row.series = ser.d[0];
        row.series_converged = ser.converged;
        const auto res = integrate(dche_ivp(sol.instance.params, z_anchor, seed.d[0], seed.d[1], zt, tol));
        row.integrated = res.u;
        row.integration_error = res.error_estimate;
        const double scale = std::max(std::abs(row.series), 1e-300);
        row.deviation = zt == z_anchor ? 0.0 : std::abs(row.integrated - row.series) / scale;
        rep.max_deviation = std::max(rep.max_deviation, row.deviation);
        rep.rows.push_back(row);
    }
    return rep;
}

} // namespace dche
