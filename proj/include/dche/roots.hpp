#pragma once

// All roots of a complex polynomial by simultaneous iteration.

#include "error.hpp"
#include "scalar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace dche {

struct RootCluster {
    Complex value;
    unsigned multiplicity = 1;
};

struct RootResult {
    std::vector<RootCluster> roots;
    bool converged = false;
    std::size_t iterations = 0;
    std::string method;
};

struct RootOptions {
    double tol = 1e-14;
    std::size_t max_iterations = 2000;
    double cluster_radius = 1e-8;
};

namespace detail {

/// Horner evaluation of p and p' (coefficients ascending).
inline std::pair<Complex, Complex> horner(const std::vector<Complex>& c, const Complex& z) {
    Complex p{}, dp{};
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        dp = dp * z + p;
        p = p * z + *it;
    }
    return {p, dp};
}

inline std::vector<Complex> initial_circle(const std::vector<Complex>& monic) {
    const std::size_t n = monic.size() - 1;
    double radius = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        radius = std::max(radius, std::pow(std::abs(monic[k]), 1.0 / static_cast<double>(n - k)));
    radius = std::max(radius, 1e-3);
    std::vector<Complex> z(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) + 0.4;
        z[k] = std::polar(radius * (1.0 + 0.01 * static_cast<double>(k % 3)), angle);
    }
    return z;
}

/// One sweep; returns the largest relative correction.
inline double durand_kerner_sweep(const std::vector<Complex>& monic, std::vector<Complex>& z) {
    double worst = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        Complex denom(1.0);
        for (std::size_t j = 0; j < z.size(); ++j)
            if (j != i)
                denom *= z[i] - z[j];
        if (denom == Complex{})
            denom = Complex(1e-300);
        const Complex step = horner(monic, z[i]).first / denom;
        z[i] -= step;
        worst = std::max(worst, std::abs(step) / (1.0 + std::abs(z[i])));
    }
    return worst;
}

inline double aberth_sweep(const std::vector<Complex>& monic, std::vector<Complex>& z) {
    double worst = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const auto [p, dp] = horner(monic, z[i]);
        if (p == Complex{})
            continue;
        const Complex ratio = p / dp;
        Complex repulsion{};
        for (std::size_t j = 0; j < z.size(); ++j)
            if (j != i && z[i] != z[j])
                repulsion += 1.0 / (z[i] - z[j]);
        const Complex step = ratio / (1.0 - ratio * repulsion);
        z[i] -= step;
        worst = std::max(worst, std::abs(step) / (1.0 + std::abs(z[i])));
    }
    return worst;
}

inline void newton_polish(const std::vector<Complex>& c, Complex& z, double tol) {
    for (int it = 0; it < 20; ++it) {
        const auto [p, dp] = horner(c, z);
        if (dp == Complex{})
            return;
        const Complex next = z - p / dp;
        if (std::abs(horner(c, next).first) >= std::abs(p))
            return;
        z = next;
        if (std::abs(p / dp) <= tol * (1.0 + std::abs(z)))
            return;
    }
}

} // namespace detail

/// Roots of sum_k c_k q^k. Durand-Kerner from a perturbed circle, Aberth if
/// that stalls, then Newton polish on the original coefficients; roots closer
/// than cluster_radius are merged with multiplicity.
inline RootResult polynomial_roots(std::vector<Complex> c, const RootOptions& opt = {}) {
    while (!c.empty() && c.back() == Complex{})
        c.pop_back();
    if (c.empty())
        fail(ErrorKind::InvalidArgument, "roots of the zero polynomial");
    RootResult out;
    const std::size_t n = c.size() - 1;
    if (n == 0) {
        out.converged = true;
        out.method = "constant";
        return out;
    }
    std::vector<Complex> monic(c.size());
    for (std::size_t k = 0; k <= n; ++k)
        monic[k] = c[k] / c[n];

    std::vector<Complex> z;
    if (n == 1) {
        z = {-monic[0]};
        out.converged = true;
        out.method = "linear";
    } else {
        for (const char* method : {"durand-kerner", "aberth"}) {
            z = detail::initial_circle(monic);
            const bool dk = std::string(method) == "durand-kerner";
            for (std::size_t it = 0; it < opt.max_iterations; ++it) {
                ++out.iterations;
                const double worst = dk ? detail::durand_kerner_sweep(monic, z) : detail::aberth_sweep(monic, z);
                if (!std::isfinite(worst))
                    break;
                if (worst <= opt.tol) {
                    out.converged = true;
                    break;
                }
            }
            out.method = method;
            if (out.converged)
                break;
        }
    }
    for (auto& r : z)
        detail::newton_polish(c, r, opt.tol);
    // Real coefficients: roots that are real to working precision are reported as real.
    if (std::all_of(c.begin(), c.end(), [](const Complex& x) { return x.imag() == 0.0; }))
        for (auto& r : z)
            if (std::abs(r.imag()) <= 1e-12 * (1.0 + std::abs(r.real())))
                r = Complex(r.real(), 0.0);

    std::vector<bool> used(z.size(), false);
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (used[i])
            continue;
        RootCluster cl{z[i], 1};
        Complex sum = z[i];
        for (std::size_t j = i + 1; j < z.size(); ++j) {
            if (!used[j] && std::abs(z[j] - z[i]) <= opt.cluster_radius * (1.0 + std::abs(z[i]))) {
                used[j] = true;
                sum += z[j];
                ++cl.multiplicity;
            }
        }
        cl.value = sum / static_cast<double>(cl.multiplicity);
        out.roots.push_back(cl);
    }
    std::sort(out.roots.begin(), out.roots.end(), [](const RootCluster& a, const RootCluster& b) {
        return a.value.real() != b.value.real() ? a.value.real() < b.value.real() : a.value.imag() < b.value.imag();
    });
    return out;
}

/// Best rational approximation p/q with q <= max_den by continued fractions.
inline std::optional<Rational> rational_candidate(double x, long long max_den = 1000000, double rel = 1e-9) {
    if (!std::isfinite(x))
        return std::nullopt;
    Integer h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double r = x;
    for (int it = 0; it < 64; ++it) {
        const double a = std::floor(r);
        if (std::abs(a) > 1e15)
            break;
        const Integer ai(static_cast<long long>(a));
        const Integer h2 = ai * h1 + h0;
        const Integer k2 = ai * k1 + k0;
        if (k2 > max_den)
            break;
        h0 = h1; h1 = h2; k0 = k1; k1 = k2;
        const Rational cand(h1, k1);
        if (std::abs(cand.convert_to<double>() - x) <= rel * (1.0 + std::abs(x)))
            return cand;
        const double frac = r - a;
        if (frac == 0.0)
            break;
        r = 1.0 / frac;
    }
    return std::nullopt;
}

} // namespace dche
