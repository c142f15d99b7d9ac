#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <complex>
#include <concepts>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

namespace dche {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;
using Complex = std::complex<double>;

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;
    static constexpr const char* name = "exact";

    static bool is_zero(const Rational& x) { return x == 0; }
    static double magnitude(const Rational& x) { return abs(x).convert_to<double>(); }
    static Complex to_complex(const Rational& x) { return {x.convert_to<double>(), 0.0}; }

    static std::optional<long long> integer_value(const Rational& x) {
        if (denominator(x) != 1)
            return std::nullopt;
        const Integer n = numerator(x);
        if (abs(n) > Integer(std::numeric_limits<long long>::max() / 2))
            return std::nullopt;
        return n.convert_to<long long>();
    }

    static std::string to_string(const Rational& x) { return x.str(); }
};

template <>
struct scalar_traits<Complex> {
    static constexpr bool exact = false;
    static constexpr const char* name = "float";

    static bool is_zero(const Complex& x) { return x == Complex{}; }
    static double magnitude(const Complex& x) { return std::abs(x); }
    static Complex to_complex(const Complex& x) { return x; }

    // Only values that are integral to the last bit count; floating inputs
    // such as 2.0000000001 are treated as generic.
    static std::optional<long long> integer_value(const Complex& x) {
        if (x.imag() != 0.0 || !std::isfinite(x.real()))
            return std::nullopt;
        const double r = x.real();
        if (r != std::floor(r) || std::abs(r) > 1e15)
            return std::nullopt;
        return static_cast<long long>(r);
    }

    static std::string to_string(const Complex& x) {
        std::ostringstream os;
        os.precision(17);
        // Adding +0.0 folds -0 into 0 so output does not depend on sign of zero.
        os << x.real() + 0.0;
        if (x.imag() != 0.0) {
            if (x.imag() >= 0.0 || std::isnan(x.imag()))
                os << '+';
            os << x.imag() << 'i';
        }
        return os.str();
    }
};

/// The two field instantiations every generic routine supports.
template <class S>
concept Scalar = requires { scalar_traits<S>::exact; };

template <Scalar S>
inline constexpr bool is_exact_v = scalar_traits<S>::exact;

template <Scalar S>
bool is_zero(const S& x) { return scalar_traits<S>::is_zero(x); }

template <Scalar S>
double magnitude(const S& x) { return scalar_traits<S>::magnitude(x); }

template <Scalar S>
Complex to_complex(const S& x) { return scalar_traits<S>::to_complex(x); }

template <Scalar S>
std::optional<long long> integer_value(const S& x) { return scalar_traits<S>::integer_value(x); }

template <Scalar S>
bool is_integer(const S& x) { return integer_value(x).has_value(); }

template <Scalar S>
bool is_nonpositive_integer(const S& x) {
    const auto v = integer_value(x);
    return v && *v <= 0;
}

template <Scalar S>
std::string to_string(const S& x) { return scalar_traits<S>::to_string(x); }

template <Scalar S>
S ratio(long long p, long long q) { return S(p) / S(q); }

/// Zero test used by the derivation checks: exact in rational mode, relative
/// to the magnitude of the contributing terms in floating mode.
template <Scalar S>
bool negligible(const S& x, double scale, double rel = 1e-12) {
    if constexpr (is_exact_v<S>)
        return x == 0;
    else
        return magnitude(x) <= rel * std::max(1.0, scale);
}

/// Equality of parameter values: exact for rationals, to rounding for floats.
template <Scalar S>
bool same_value(const S& a, const S& b) {
    return negligible(a - b, std::max(magnitude(a), magnitude(b)), 1e-13);
}

template <Scalar To, Scalar From>
To convert(const From& x) {
    if constexpr (std::same_as<To, From>)
        return x;
    else if constexpr (std::same_as<To, Complex>)
        return to_complex(x);
    else
        static_assert(std::same_as<To, From>, "no lossless conversion to an exact scalar");
}

/// Exact square root of a rational when numerator and denominator are both
/// perfect squares.
inline std::optional<Rational> exact_sqrt(const Rational& x) {
    if (x < 0)
        return std::nullopt;
    const Integer num = numerator(x);
    const Integer den = denominator(x);
    const Integer rn = boost::multiprecision::sqrt(num);
    const Integer rd = boost::multiprecision::sqrt(den);
    if (rn * rn != num || rd * rd != den)
        return std::nullopt;
    return Rational(rn, rd);
}

} // namespace dche
