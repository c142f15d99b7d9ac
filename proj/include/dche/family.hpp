#pragma once

#include "basis.hpp"
#include "error.hpp"
#include "params.hpp"
#include "recurrence_engine.hpp"
#include "scalar.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dche {

enum class Family { TwoTerm, ThreeTermA, ThreeTermDeg, FiveTerm, ThreeTermC, SevenTermV };

inline constexpr std::array<Family, 6> all_families{Family::TwoTerm,  Family::ThreeTermA, Family::ThreeTermDeg,
                                                    Family::FiveTerm, Family::ThreeTermC, Family::SevenTermV};

inline std::string_view to_string(Family f) {
    switch (f) {
    case Family::TwoTerm: return "two-term";
    case Family::ThreeTermA: return "three-term-a";
    case Family::ThreeTermDeg: return "three-term-deg";
    case Family::FiveTerm: return "five-term";
    case Family::ThreeTermC: return "three-term-c";
    case Family::SevenTermV: return "seven-term-v";
    }
    return "?";
}

inline std::optional<Family> parse_family(std::string_view s) {
    for (const auto f : all_families)
        if (to_string(f) == s)
            return f;
    return std::nullopt;
}

enum class StencilSource { ClosedForm, Engine };
enum class Target { UEquation, VEquation };

inline std::string_view to_string(StencilSource s) { return s == StencilSource::ClosedForm ? "closed-form" : "engine"; }
inline std::string_view to_string(Target t) { return t == Target::UEquation ? "u-equation" : "v-equation"; }

template <Scalar S>
struct FamilyOptions {
    std::optional<S> alpha0;
    std::optional<S> gamma0;
    StencilSource source = StencilSource::ClosedForm;
    /// three-term-deg: take gamma0 = 1 - sqrt(...) instead of the principal root.
    bool second_branch = false;
};

template <Scalar S>
struct FamilyInstance {
    Family family = Family::ThreeTermA;
    DcheParams<S> params;
    Basis<S> basis;
    StencilSource source = StencilSource::ClosedForm;
    Target target = Target::UEquation;
    /// Term n of the series uses basis index -n (two-term polynomial form).
    bool reflected = false;
    std::vector<std::string> notes;

    long basis_index(long n) const { return reflected ? -n : n; }
};

namespace detail {

[[noreturn]] inline void inapplicable(Family f, const std::string& what) {
    fail(ErrorKind::FamilyInapplicable, std::string(to_string(f)) + ": " + what);
}

template <Scalar S>
void require_regular_lower(Family f, const S& g, const char* name) {
    if (is_nonpositive_integer(g))
        inapplicable(f, std::string(name) + " is a nonpositive integer");
}

template <Scalar S>
S degenerate_gamma0(const DcheParams<S>& p, bool second_branch) {
    const S disc = (S(1) - p.gamma) * (S(1) - p.gamma) + S(4) * p.q;
    S root;
    if constexpr (is_exact_v<S>) {
        const auto r = exact_sqrt(disc);
        if (!r)
            fail(ErrorKind::RequiresFloatingPoint,
                 "gamma0 = 1 + sqrt((1-gamma)^2 + 4q) is irrational; pass gamma0 or use float mode");
        root = *r;
    } else {
        root = std::sqrt(disc);
    }
    return second_branch ? S(1) - root : S(1) + root;
}

} // namespace detail

/// Binds parameters to a family, applying its parameter locks and defaults.
template <Scalar S>
FamilyInstance<S> make_family(const DcheParams<S>& p, Family f, const FamilyOptions<S>& opt = {}) {
    using detail::inapplicable;
    if (is_zero(p.epsilon))
        inapplicable(f, "ε must be nonzero");
    const S a_eps = p.alpha / p.epsilon;
    FamilyInstance<S> inst;
    inst.family = f;
    inst.params = p;
    inst.source = opt.source;

    switch (f) {
    case Family::TwoTerm: {
        const S mismatch = p.q + p.delta * p.epsilon;
        if (!negligible(mismatch, std::max(magnitude(p.q), magnitude(p.delta * p.epsilon))))
            inapplicable(f, "requires q = −δε");
        if (opt.alpha0 && !is_zero(*opt.alpha0))
            inapplicable(f, "only the polynomial form with α₀ = 0 is implemented");
        const S g0 = S(1) + p.gamma - a_eps;
        if (opt.gamma0 && !same_value(*opt.gamma0, g0))
            inapplicable(f, "γ₀ is fixed to 1 + α₀ + γ − α/ε");
        if (is_integer(g0))
            inapplicable(f, "γ₀ = 1 + γ − α/ε is an integer");
        inst.basis = {ShiftPattern::BothShift, S(0), g0, -p.epsilon};
        inst.reflected = true;
        break;
    }
    case Family::ThreeTermA:
        detail::require_regular_lower(f, p.gamma, "γ");
        inst.basis = {ShiftPattern::BothShift, a_eps, p.gamma, -p.epsilon};
        break;
    case Family::ThreeTermDeg: {
        if (!is_zero(p.delta))
            inapplicable(f, "requires δ = 0");
        const S g0 = opt.gamma0 ? *opt.gamma0 : detail::degenerate_gamma0(p, opt.second_branch);
        detail::require_regular_lower(f, g0, "γ₀");
        const S a0 = opt.alpha0 ? *opt.alpha0 : a_eps;
        if (!same_value(a0, a_eps) && !same_value(a0, g0))
            inapplicable(f, "requires α₀ ∈ {α/ε, γ₀}");
        inst.basis = {ShiftPattern::AShift, a0, g0, -p.epsilon};
        break;
    }
    case Family::FiveTerm: {
        const S g0 = opt.gamma0 ? *opt.gamma0 : p.gamma;
        detail::require_regular_lower(f, g0, "γ₀");
        const S a0 = opt.alpha0 ? *opt.alpha0 : a_eps;
        if (!same_value(a0, a_eps) && !same_value(a0, S(1) + g0))
            inapplicable(f, "requires α₀ ∈ {α/ε, 1 + γ₀}");
        if (!same_value(a0, a_eps))
            inst.notes.push_back("α₀ = 1 + γ₀ gives reducible basis functions");
        inst.basis = {ShiftPattern::AShift, a0, g0, -p.epsilon};
        break;
    }
    case Family::ThreeTermC:
        if (is_zero(p.alpha))
            inapplicable(f, "requires α ≠ 0");
        detail::require_regular_lower(f, p.gamma, "γ");
        inst.basis = {ShiftPattern::BShift, a_eps, p.gamma, -p.epsilon};
        break;
    case Family::SevenTermV: {
        if (is_zero(p.alpha))
            inapplicable(f, "requires α ≠ 0");
        const S g0 = opt.gamma0 ? *opt.gamma0 : p.gamma;
        detail::require_regular_lower(f, g0, "γ₀");
        const S a0 = opt.alpha0 ? *opt.alpha0 : -a_eps;
        if (!same_value(a0, -a_eps) && !same_value(a0, g0 + S(2)))
            inapplicable(f, "requires α₀ ∈ {−α/ε, γ₀ + 2}");
        if (!same_value(a0, -a_eps))
            inst.notes.push_back("α₀ = γ₀ + 2 is the alternative left-terminating choice");
        if (is_zero(p.q))
            inst.notes.push_back("q = 0: z0 coincides with z = 0; the v-equation is a DCHE with altered parameters");
        inst.basis = {ShiftPattern::AShift, a0, g0, p.epsilon};
        inst.target = Target::VEquation;
        inst.source = StencilSource::Engine;
        break;
    }
    }
    return inst;
}

/// The ODE the family's recurrence is derived from.
template <Scalar S>
PolyOde<S> family_ode(const FamilyInstance<S>& inst) {
    switch (inst.family) {
    case Family::FiveTerm: return dche_ode(inst.params, 1);
    case Family::SevenTermV: return v_equation_ode(inst.params, 1);
    default: return dche_ode(inst.params, 0);
    }
}

template <Scalar To, Scalar From>
FamilyInstance<To> convert_instance(const FamilyInstance<From>& i) {
    return {i.family, convert_params<To>(i.params), convert_basis<To>(i.basis), i.source, i.target, i.reflected, i.notes};
}

template <Scalar S>
std::string describe(const FamilyInstance<S>& i) {
    return std::string(to_string(i.family)) + " [" + i.basis.describe() + "; " + i.params.describe() + "; " +
           std::string(to_string(i.source)) + "]";
}

} // namespace dche
