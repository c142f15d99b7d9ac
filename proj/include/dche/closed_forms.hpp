#pragma once

// Reference closed forms of the recurrence coefficients, in column
// convention: entry j at index n multiplies u_{n+j}, so the coefficient of
// a_{n-i} in row n is entry (lo + i) at index n - i.
//
// The five-term and seven-term forms are tabulated with the common factors
// eps^3 and eps^2 cleared; closed_form_scale returns that factor so that
// closed form == scale * engine column.

#include "error.hpp"
#include "family.hpp"
#include "recurrence_engine.hpp"
#include "scalar.hpp"

#include <string>
#include <vector>

namespace dche {

/// The tabulated last seven-term coefficient carries -delta where the
/// derivation from the v-equation produces -gamma. Both are kept so the
/// discrepancy stays visible.
enum class SevenTermLast { AsTabulated, Derived };

template <Scalar S>
S closed_form_scale(Family f, const DcheParams<S>& p) {
    switch (f) {
    case Family::FiveTerm: return p.epsilon * p.epsilon * p.epsilon;
    case Family::SevenTermV: return p.epsilon * p.epsilon;
    default: return S(1);
    }
}

/// Offsets for which a closed form exists.
inline std::vector<int> closed_form_offsets(Family f) {
    switch (f) {
    case Family::ThreeTermA:
    case Family::ThreeTermDeg:
    case Family::ThreeTermC: return {-1, 0, 1};
    case Family::FiveTerm: return {-2, -1, 0, 1, 2};
    case Family::SevenTermV: return {-3, 3};
    case Family::TwoTerm: break;
    }
    fail(ErrorKind::InvalidArgument, "two-term coefficients are closed-form; there is no stencil table");
}

template <Scalar S>
ShiftStencil<S> closed_form_stencil(const FamilyInstance<S>& inst, long n,
                                    SevenTermLast last = SevenTermLast::AsTabulated) {
    const auto& p = inst.params;
    const auto& b = inst.basis;
    const S N(static_cast<long long>(n));
    const S a_eps = p.alpha / p.epsilon;
    const S e = p.epsilon;
    switch (inst.family) {
    case Family::ThreeTermA: {
        const S r = -N * (p.gamma + N - S(1));
        return {{-1, r}, {0, -r - p.q}, {1, -p.delta * (p.alpha + e * N) / (p.gamma + N)}};
    }
    case Family::ThreeTermC: {
        const S r = -N * (p.gamma + N - S(1));
        return {{-1, r}, {0, -r - e * p.delta - p.q}, {1, p.delta * (e - p.alpha / (p.gamma + N))}};
    }
    case Family::ThreeTermDeg: {
        const S an = b.alpha(n);
        const S g0 = b.gamma0;
        return {{-1, (an - g0) * (an - a_eps)},
                {0, (an - a_eps) * (g0 - S(2) * an) - an * (p.gamma - g0) - p.q},
                {1, an * (an + p.gamma - g0 - a_eps)}};
    }
    case Family::FiveTerm: {
        if (!same_value(b.alpha0, a_eps))
            fail(ErrorKind::FamilyInapplicable, "five-term closed forms assume α₀ = α/ε");
        const S g0 = b.gamma0;
        const S al = p.alpha;
        const S g = p.gamma;
        const S t = -N * (al + (N - S(1) - g0) * e) * (al + (N - g0) * e);
        const S s = (al * (g - g0 + S(4) * N) + e * (p.q + N * (g - S(3) * g0 + S(4) * N - S(2)))) *
                    (al + (N - g0) * e);
        const S q = (al + N * e) *
                    (al * (S(3) * (g - g0) + S(4) * N) +
                     e * ((S(3) * g + S(4) * N + S(2)) * N - (g + S(5) * N + S(2)) * g0 + g0 * g0 + p.q +
                          S(2) * g + p.delta * e));
        const S pp = -(N + g - g0) * (al + e * N) * (al + e * (S(1) + N));
        return {{-2, t}, {-1, s}, {0, -(t + s + q + pp)}, {1, q}, {2, pp}};
    }
    case Family::SevenTermV: {
        const S an = b.alpha(n);
        const S g0 = b.gamma0;
        const S first = (an - g0) * (an - g0 - S(1)) * (an - g0 - S(2)) * (an + a_eps);
        const S tail = last == SevenTermLast::AsTabulated ? p.delta : p.gamma;
        const S final = an * (an + S(1)) * (an + S(2)) * (an + S(1) - g0 - tail + a_eps);
        return {{-3, first}, {3, final}};
    }
    case Family::TwoTerm: break;
    }
    fail(ErrorKind::InvalidArgument, "two-term coefficients are closed-form; there is no stencil table");
}

struct StencilMismatch {
    long n = 0;
    int offset = 0;
    std::string parameters;
    std::string engine;
    std::string closed_form;
};

struct StencilVerification {
    Family family = Family::ThreeTermA;
    std::size_t draws = 0;
    std::size_t comparisons = 0;
    std::vector<StencilMismatch> mismatches;
    std::vector<std::string> failures;

    bool passed() const { return mismatches.empty() && failures.empty() && comparisons > 0; }
};

/// Compares engine-derived columns with the closed forms entry by entry.
/// Offsets of the engine column that have no closed form are not compared;
/// for full tables the engine column must not extend beyond them.
template <Scalar S>
StencilVerification verify_against_closed_form(const std::vector<FamilyInstance<S>>& instances, long n_first,
                                               long n_last, SevenTermLast last = SevenTermLast::AsTabulated) {
    StencilVerification rep;
    if (instances.empty())
        return rep;
    rep.family = instances.front().family;
    const auto offsets = closed_form_offsets(rep.family);
    const bool full_table = rep.family != Family::SevenTermV;
    for (const auto& inst : instances) {
        ++rep.draws;
        const auto ode = family_ode(inst);
        const S scale = closed_form_scale(inst.family, inst.params);
        for (long n = n_first; n <= n_last; ++n) {
            try {
                const auto engine = derive_stencil(ode, inst.basis, n);
                const auto closed = closed_form_stencil(inst, n, last);
                const auto record = [&](int j, const S& lhs, const S& rhs) {
                    rep.mismatches.push_back({n, j, describe(inst), to_string(lhs), to_string(rhs)});
                };
                for (const int j : offsets) {
                    ++rep.comparisons;
                    const S lhs = scale * engine.at(j);
                    const S rhs = closed.at(j);
                    if constexpr (is_exact_v<S>) {
                        if (lhs != rhs)
                            record(j, lhs, rhs);
                    } else if (!negligible(lhs - rhs, std::max(magnitude(lhs), magnitude(rhs)), 1e-10)) {
                        record(j, lhs, rhs);
                    }
                }
                if (full_table) {
                    for (const auto& [j, c] : engine.entries())
                        if (!closed.contains(j) && !is_zero(c))
                            record(j, scale * c, S(0));
                }
            } catch (const Error& e) {
                rep.failures.push_back("n=" + std::to_string(n) + " " + describe(inst) + ": " + e.what());
            }
        }
    }
    return rep;
}

} // namespace dche
