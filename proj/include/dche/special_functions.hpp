#pragma once

#include "error.hpp"
#include "scalar.hpp"

#include <cstddef>
#include <string>

namespace dche {

template <Scalar S>
S pochhammer(const S& x, unsigned n) {
    S acc(1);
    for (unsigned k = 0; k < n; ++k)
        acc *= x + S(static_cast<long long>(k));
    return acc;
}

/// Arguments of 1F1(a; b; x).
template <Scalar S>
struct KummerArgs {
    S a;
    S b;
    S x;
};

struct SeriesOptions {
    double tol = 1e-14;
    std::size_t max_terms = 10000;
    /// Beyond this the direct power series loses too many digits to
    /// cancellation; no asymptotic evaluation is attempted.
    double max_argument = 50.0;
};

namespace detail {

template <Scalar S>
std::string describe(const KummerArgs<S>& k) {
    return "1F1(" + to_string(k.a) + "; " + to_string(k.b) + "; " + to_string(k.x) + ")";
}

} // namespace detail

/// Number of terms of a terminating series (a = -m gives m + 1 terms), or
/// nullopt when the series is infinite. Throws InvalidLowerParameter when the
/// lower parameter hits a pole before the series terminates.
template <Scalar S>
std::optional<long long> kummer_terminating_terms(const KummerArgs<S>& k) {
    std::optional<long long> terms;
    if (const auto ai = integer_value(k.a); ai && *ai <= 0)
        terms = -*ai + 1;
    if (const auto bi = integer_value(k.b); bi && *bi <= 0) {
        // (b)_j first vanishes at j = -b + 1; a terminating sum is still
        // well defined if it stops before that index.
        const long long pole_index = -*bi + 1;
        if (!terms || *terms > pole_index)
            fail(ErrorKind::InvalidLowerParameter,
                 "lower parameter is a nonpositive integer in " + detail::describe(k));
    }
    return terms;
}

/// 1F1(a; b; x) by direct summation. Terminating series are summed exactly
/// (bit-exact in rational mode); infinite series require floating scalars.
template <Scalar S>
S kummer_m(const KummerArgs<S>& k, const SeriesOptions& opt = {}) {
    const auto terms = kummer_terminating_terms(k);
    if (terms) {
        S term(1);
        S sum(1);
        for (long long j = 0; j + 1 < *terms; ++j) {
            const S sj(j);
            term *= (k.a + sj) * k.x / ((k.b + sj) * S(j + 1));
            sum += term;
        }
        return sum;
    }
    if (is_zero(k.x))
        return S(1);
    if constexpr (is_exact_v<S>) {
        fail(ErrorKind::RequiresFloatingPoint,
             "non-terminating " + detail::describe(k) + " needs floating-point evaluation");
    } else {
        if (magnitude(k.x) > opt.max_argument)
            fail(ErrorKind::ArgumentOutOfRange,
                 "|x| exceeds the series evaluation envelope in " + detail::describe(k));
        S term(1);
        S sum(1);
        int small_run = 0;
        for (std::size_t j = 0; j < opt.max_terms; ++j) {
            const double sj = static_cast<double>(j);
            term *= (k.a + sj) * k.x / ((k.b + sj) * (sj + 1.0));
            sum += term;
            if (std::abs(term) <= opt.tol * std::abs(sum)) {
                if (++small_run == 3)
                    return sum;
            } else {
                small_run = 0;
            }
        }
        fail(ErrorKind::NoConvergence, "term cap exceeded in " + detail::describe(k));
    }
}

/// k-th derivative with respect to x: (a)_k/(b)_k 1F1(a+k; b+k; x).
template <Scalar S>
S kummer_m_diff(const KummerArgs<S>& k, unsigned order, const SeriesOptions& opt = {}) {
    if (order == 0)
        return kummer_m(k, opt);
    const S num = pochhammer(k.a, order);
    if (is_zero(num))
        return S(0);
    const S den = pochhammer(k.b, order);
    if (is_zero(den))
        fail(ErrorKind::InvalidLowerParameter,
             "derivative of " + detail::describe(k) + " divides by a vanishing lower parameter");
    const S ord(static_cast<long long>(order));
    return num / den * kummer_m(KummerArgs<S>{k.a + ord, k.b + ord, k.x}, opt);
}

template <Scalar S>
S kummer_m_derivative(const KummerArgs<S>& k, const SeriesOptions& opt = {}) {
    if (is_zero(k.b))
        fail(ErrorKind::InvalidLowerParameter, "b = 0 in " + detail::describe(k));
    return kummer_m_diff(k, 1, opt);
}

} // namespace dche
