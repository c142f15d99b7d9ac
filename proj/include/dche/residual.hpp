#pragma once

#include "error.hpp"
#include "expansions.hpp"
#include "params.hpp"
#include "scalar.hpp"

#include <algorithm>
#include <cmath>

namespace dche {

/// u'' + (delta/z^2 + gamma/z + eps) u' + (alpha z - q)/z^2 u.
template <Scalar S>
Complex dche_residual(const DcheParams<S>& params, const Complex& u, const Complex& du, const Complex& d2u,
                      const Complex& z) {
    if (z == Complex{})
        fail(ErrorKind::DomainError, "residual at z = 0");
    const auto p = convert_params<Complex>(params);
    const Complex z2 = z * z;
    return d2u + (p.delta / z2 + p.gamma / z + p.epsilon) * du + (p.alpha * z - p.q) / z2 * u;
}

/// Cleared residual z^2 (...) divided by the largest of |z^2 u''|,
/// |(eps z^2 + gamma z + delta) u'| and |(alpha z - q) u|.
template <Scalar S>
double relative_dche_residual(const DcheParams<S>& params, const Complex& u, const Complex& du, const Complex& d2u,
                              const Complex& z) {
    const auto p = convert_params<Complex>(params);
    const Complex t2 = z * z * d2u;
    const Complex t1 = (p.epsilon * z * z + p.gamma * z + p.delta) * du;
    const Complex t0 = (p.alpha * z - p.q) * u;
    const double scale = std::max({std::abs(t2), std::abs(t1), std::abs(t0)});
    const double r = std::abs(z * z * dche_residual(params, u, du, d2u, z));
    return scale > 0.0 ? r / scale : r;
}

template <Scalar S>
double relative_dche_residual(const DcheParams<S>& params, const SeriesValue& v, const Complex& z) {
    return relative_dche_residual(params, v.d[0], v.d[1], v.d[2], z);
}

/// v'' - (delta/z^2 + (gamma-2)/z + eps + 1/(z - q/alpha)) v' + (alpha z - q)/z^2 v.
inline Complex v_equation_residual(const VEquation& veq, const Complex& v, const Complex& dv, const Complex& d2v,
                                   const Complex& z) {
    if (z == Complex{})
        fail(ErrorKind::DomainError, "v-equation residual at z = 0");
    if (!veq.z0)
        fail(ErrorKind::DomainError, "v-equation undefined for alpha = 0");
    if (z == *veq.z0)
        fail(ErrorKind::DomainError, "v-equation residual at z0 = q/alpha");
    const auto& p = veq.params;
    const Complex z2 = z * z;
    return d2v - (p.delta / z2 + (p.gamma - 2.0) / z + p.epsilon + 1.0 / (z - *veq.z0)) * dv +
           (p.alpha * z - p.q) / z2 * v;
}

/// Residual relative to the largest of its three terms.
inline double relative_v_residual(const VEquation& veq, const Complex& v, const Complex& dv, const Complex& d2v,
                                  const Complex& z) {
    const auto& p = veq.params;
    const Complex z2 = z * z;
    const double scale =
        std::max({std::abs(d2v),
                  std::abs((p.delta / z2 + (p.gamma - 2.0) / z + p.epsilon + 1.0 / (z - *veq.z0)) * dv),
                  std::abs((p.alpha * z - p.q) / z2 * v)});
    const double r = std::abs(v_equation_residual(veq, v, dv, d2v, z));
    return scale > 0.0 ? r / scale : r;
}

} // namespace dche
