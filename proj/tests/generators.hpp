#pragma once

// Seeded draws for property tests. Every generator takes the engine by
// reference so a failing case can be replayed from its seed.

#include "dche/dche.hpp"

#include <cmath>
#include <random>

namespace dche::testing {

using Rng = std::mt19937_64;

/// p/q with |p/q| <= bound and q in [1, max_den].
inline Rational random_rational(Rng& rng, long long bound, long long max_den = 12) {
    std::uniform_int_distribution<long long> den(1, max_den);
    const long long q = den(rng);
    std::uniform_int_distribution<long long> num(-bound * q, bound * q);
    return Rational(num(rng), q);
}

/// Rational in [lo, hi] on a grid of step 1/max_den.
inline Rational random_rational_in(Rng& rng, const Rational& lo, const Rational& hi, long long max_den = 12) {
    std::uniform_int_distribution<long long> den(1, max_den);
    const long long q = den(rng);
    const Integer lo_n = numerator(Rational(lo * q));
    const Integer hi_n = numerator(Rational(hi * q));
    const long long a = Rational(lo * q) == Rational(lo_n) ? lo_n.convert_to<long long>()
                                                           : lo_n.convert_to<long long>() + 1;
    const long long b = hi_n.convert_to<long long>();
    std::uniform_int_distribution<long long> num(a, std::max(a, b));
    return Rational(num(rng), q);
}

/// Noninteger rational in (lo, hi).
inline Rational random_noninteger(Rng& rng, const Rational& lo, const Rational& hi, long long max_den = 12) {
    for (;;) {
        const Rational r = random_rational_in(rng, lo, hi, std::max<long long>(max_den, 2));
        if (denominator(r) != 1 && r > lo && r < hi)
            return r;
    }
}

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Complex random_complex(Rng& rng, double radius) {
    for (;;) {
        const Complex z(uniform(rng, -radius, radius), uniform(rng, -radius, radius));
        if (std::abs(z) <= radius)
            return z;
    }
}

/// Complex value at distance >= clearance from every nonpositive integer.
inline Complex random_lower_parameter(Rng& rng, double radius, double clearance = 0.25) {
    for (;;) {
        const Complex b = random_complex(rng, radius);
        const double k = std::round(b.real());
        if (k > 0.0 || std::abs(b - Complex(k, 0.0)) >= clearance)
            return b;
    }
}

/// Point with |z| in [rmin, rmax] and arbitrary phase.
inline Complex random_annulus(Rng& rng, double rmin, double rmax) {
    return std::polar(uniform(rng, rmin, rmax), uniform(rng, -3.14159, 3.14159));
}

/// DCHE parameters with eps = 1, gamma noninteger in (1/2, 3), |delta|, |q|, |alpha| <= 2.
inline DcheParams<Rational> random_dche(Rng& rng) {
    DcheParams<Rational> p;
    p.epsilon = 1;
    p.gamma = random_noninteger(rng, Rational(1, 2), Rational(3));
    p.delta = random_rational(rng, 2);
    p.q = random_rational(rng, 2);
    p.alpha = random_rational(rng, 2);
    return p;
}

/// Fully generic rational parameters for exact stencil checks: eps != 0,
/// gamma noninteger.
inline DcheParams<Rational> random_generic(Rng& rng) {
    DcheParams<Rational> p;
    do {
        p.epsilon = random_rational(rng, 3);
    } while (p.epsilon == 0);
    p.gamma = random_noninteger(rng, Rational(-5), Rational(5));
    p.delta = random_rational(rng, 3);
    p.q = random_rational(rng, 3);
    do {
        p.alpha = random_rational(rng, 3);
    } while (p.alpha == 0);
    return p;
}

/// Valid instance of a stencil family from fully generic rational draws.
/// Free lower parameters are drawn noninteger; the alternative alpha0 locks
/// are taken on odd draws when `mix_locks` is set.
inline FamilyInstance<Rational> random_instance(Rng& rng, Family f, bool mix_locks = false,
                                                StencilSource source = StencilSource::ClosedForm) {
    auto p = random_generic(rng);
    FamilyOptions<Rational> opt;
    opt.source = source;
    const bool alt = mix_locks && std::uniform_int_distribution<int>(0, 1)(rng) == 1;
    switch (f) {
    case Family::ThreeTermDeg:
        p.delta = 0;
        opt.gamma0 = random_noninteger(rng, Rational(-5), Rational(5));
        if (alt)
            opt.alpha0 = *opt.gamma0;
        break;
    case Family::FiveTerm:
    case Family::SevenTermV:
        opt.gamma0 = random_noninteger(rng, Rational(-5), Rational(5));
        if (alt && f == Family::SevenTermV)
            opt.alpha0 = *opt.gamma0 + 2;
        break;
    case Family::TwoTerm:
        p.q = -p.delta * p.epsilon;
        while (denominator(Rational(1 + p.gamma - p.alpha / p.epsilon)) == 1)
            p.alpha += Rational(1, 3);
        break;
    default: break;
    }
    return make_family(p, f, opt);
}

} // namespace dche::testing
