#pragma once

#include "error.hpp"
#include "scalar.hpp"
#include "special_functions.hpp"

#include <string>
#include <string_view>

namespace dche {

/// How the index n enters the Kummer functions u_n = 1F1(alpha_n; gamma_n; s0 z).
enum class ShiftPattern {
    BothShift, ///< 1F1(alpha0 + n; gamma0 + n; s0 z)
    AShift,    ///< 1F1(alpha0 + n; gamma0; s0 z)
    BShift,    ///< 1F1(alpha0; gamma0 + n; s0 z)
};

inline std::string_view to_string(ShiftPattern p) {
    switch (p) {
    case ShiftPattern::BothShift: return "both-shift";
    case ShiftPattern::AShift: return "a-shift";
    case ShiftPattern::BShift: return "b-shift";
    }
    return "?";
}

template <Scalar S>
struct Basis {
    ShiftPattern pattern = ShiftPattern::BothShift;
    S alpha0{0};
    S gamma0{1};
    S s0{-1};

    S alpha(long n) const {
        return pattern == ShiftPattern::BShift ? alpha0 : alpha0 + S(static_cast<long long>(n));
    }

    S gamma(long n) const {
        return pattern == ShiftPattern::AShift ? gamma0 : gamma0 + S(static_cast<long long>(n));
    }

    std::string describe() const {
        return std::string(to_string(pattern)) + " alpha0=" + dche::to_string(alpha0) +
               " gamma0=" + dche::to_string(gamma0) + " s0=" + dche::to_string(s0);
    }
};

template <Scalar To, Scalar From>
Basis<To> convert_basis(const Basis<From>& b) {
    return {b.pattern, convert<To>(b.alpha0), convert<To>(b.gamma0), convert<To>(b.s0)};
}

/// d^k/dz^k u_n(z) = s0^k (alpha_n)_k/(gamma_n)_k 1F1(alpha_n + k; gamma_n + k; s0 z).
template <Scalar S>
Complex basis_derivative(const Basis<S>& basis, long n, const Complex& z, unsigned order,
                         const SeriesOptions& opt = {}) {
    const Complex s0 = to_complex(basis.s0);
    const KummerArgs<Complex> args{to_complex(basis.alpha(n)), to_complex(basis.gamma(n)), s0 * z};
    return std::pow(s0, static_cast<int>(order)) * kummer_m_diff(args, order, opt);
}

} // namespace dche
