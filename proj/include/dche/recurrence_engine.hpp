#pragma once

// Mechanical derivation of recurrence stencils for expansions
//
//     u = sum_n a_n u_n,   u_n = 1F1(alpha_n; gamma_n; s0 z)
//
// of a polynomial-coefficient ODE P2 u'' + P1 u' + P0 u = 0. The second
// derivative of u_n is removed with the Kummer equation, which leaves a
// combination of monomials z^k u_n and z^k u'_n. Each monomial is then
// rewritten as a finite combination sum_j c_j u_{n+j} using the contiguous
// relations of the chosen shift pattern. Monomials a pattern cannot absorb
// must carry an exactly vanishing coefficient; that requirement is what
// fixes s0 and alpha0 for each family.

#include "basis.hpp"
#include "error.hpp"
#include "params.hpp"
#include "polynomial.hpp"
#include "scalar.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dche {

/// coeff * z^k * d^d u_n / dz^d with d in {0, 1}.
template <Scalar S>
struct SymTerm {
    unsigned k = 0;
    unsigned d = 0;
    S coeff{0};
};

/// Finite map offset j -> c_j standing for sum_j c_j u_{n+j}.
template <Scalar S>
class ShiftStencil {
public:
    ShiftStencil() = default;
    ShiftStencil(std::initializer_list<std::pair<const int, S>> init) : e_(init) {}

    void add(int offset, const S& c) {
        auto [it, inserted] = e_.try_emplace(offset, c);
        if (!inserted)
            it->second += c;
    }

    /// this += factor * (other shifted by `shift`).
    void accumulate(const ShiftStencil& other, const S& factor, int shift = 0) {
        for (const auto& [j, c] : other.e_)
            add(j + shift, factor * c);
    }

    S at(int offset) const {
        const auto it = e_.find(offset);
        return it == e_.end() ? S(0) : it->second;
    }

    bool contains(int offset) const { return e_.count(offset) != 0; }
    bool empty() const { return e_.empty(); }
    int min_offset() const { return e_.empty() ? 0 : e_.begin()->first; }
    int max_offset() const { return e_.empty() ? 0 : e_.rbegin()->first; }
    int width() const { return e_.empty() ? 0 : max_offset() - min_offset() + 1; }
    const std::map<int, S>& entries() const { return e_; }

    ShiftStencil scaled(const S& factor) const {
        ShiftStencil out;
        out.accumulate(*this, factor);
        return out;
    }

    S sum() const {
        S acc(0);
        for (const auto& [j, c] : e_)
            acc += c;
        return acc;
    }

private:
    std::map<int, S> e_;
};

/// P2 u'' + P1 u' + P0 u = 0 with polynomial coefficients in z.
template <Scalar S>
struct PolyOde {
    Polynomial<S> p2;
    Polynomial<S> p1;
    Polynomial<S> p0;
    std::optional<S> apparent_singularity;
    std::string description;

    PolyOde times_z(unsigned power) const {
        const auto zk = Polynomial<S>::monomial(power);
        PolyOde out{p2 * zk, p1 * zk, p0 * zk, apparent_singularity, description};
        if (power > 0)
            out.description += " times z^" + std::to_string(power);
        return out;
    }
};

/// z^2 u'' + (eps z^2 + gamma z + delta) u' + (alpha z - q) u = 0, optionally
/// multiplied by z^extra.
template <Scalar S>
PolyOde<S> dche_ode(const DcheParams<S>& p, unsigned extra_z_power = 0) {
    PolyOde<S> ode{Polynomial<S>{S(0), S(0), S(1)},
                   Polynomial<S>{p.delta, p.gamma, p.epsilon},
                   Polynomial<S>{-p.q, p.alpha},
                   std::nullopt,
                   "DCHE cleared by z^2"};
    return ode.times_z(extra_z_power);
}

/// Equation satisfied by v = z^gamma exp(eps z - delta/z) u', cleared by
/// z^2 (z - z0) with the apparent singularity z0 = q/alpha.
template <Scalar S>
PolyOde<S> v_equation_ode(const DcheParams<S>& p, unsigned extra_z_power = 0) {
    if (is_zero(p.alpha))
        fail(ErrorKind::FamilyInapplicable, "v-equation requires alpha != 0 (z0 = q/alpha)");
    const S z0 = p.q / p.alpha;
    const Polynomial<S> zmz0{-z0, S(1)};
    const Polynomial<S> z2{S(0), S(0), S(1)};
    const Polynomial<S> inner{p.delta, p.gamma - S(2), p.epsilon};
    PolyOde<S> ode{z2 * zmz0,
                   -(inner * zmz0 + z2),
                   Polynomial<S>{-p.q, p.alpha} * zmz0,
                   z0,
                   "v-equation cleared by z^2 (z - z0)"};
    return ode.times_z(extra_z_power);
}

/// The ODE after u_n'' has been replaced: D(z) u_n' + E(z) u_n, multiplied by
/// z^clearing_power (0 or 1) to keep both coefficients polynomial.
template <Scalar S>
struct Elimination {
    Polynomial<S> du_coeff;
    Polynomial<S> u_coeff;
    unsigned clearing_power = 0;
    std::vector<SymTerm<S>> terms;
};

template <Scalar S>
Elimination<S> eliminate_second_derivative(const PolyOde<S>& ode, const Basis<S>& basis, long n) {
    if (ode.p2.is_zero())
        fail(ErrorKind::InvalidArgument, "leading ODE coefficient is identically zero");
    // u_n'' = -(gamma_n/z - s0) u_n' + (alpha_n s0 / z) u_n; multiply by z.
    const Polynomial<S> z{S(0), S(1)};
    const S an = basis.alpha(n);
    const S gn = basis.gamma(n);
    Polynomial<S> du = z * ode.p1 + ode.p2 * Polynomial<S>{-gn, basis.s0};
    Polynomial<S> u = z * ode.p0 + ode.p2 * (an * basis.s0);

    Elimination<S> out;
    if (is_zero(du.coeff(0)) && is_zero(u.coeff(0))) {
        out.du_coeff = du.shifted_down(1);
        out.u_coeff = u.shifted_down(1);
        out.clearing_power = 0;
    } else {
        out.du_coeff = std::move(du);
        out.u_coeff = std::move(u);
        out.clearing_power = 1;
    }
    for (int k = 0; k <= out.du_coeff.degree(); ++k)
        out.terms.push_back({static_cast<unsigned>(k), 1, out.du_coeff.coeff(k)});
    for (int k = 0; k <= out.u_coeff.degree(); ++k)
        out.terms.push_back({static_cast<unsigned>(k), 0, out.u_coeff.coeff(k)});
    return out;
}

namespace detail {

inline std::string monomial_name(unsigned k, unsigned d) {
    std::string s;
    if (k == 1)
        s = "z*";
    else if (k > 1)
        s = "z^" + std::to_string(k) + "*";
    return s + (d == 1 ? "u'_n" : "u_n");
}

template <Scalar S>
S checked_inverse(const S& x, long n, const char* what) {
    if (is_zero(x))
        fail(ErrorKind::DivisionByZero,
             std::string("division by zero at n = ") + std::to_string(n) + ": " + what + " vanishes");
    return S(1) / x;
}

/// z * u_m for the a-shift pattern: (1/s0)[(alpha_m - gamma0) u_{m-1}
/// + (gamma0 - 2 alpha_m) u_m + alpha_m u_{m+1}].
template <Scalar S>
ShiftStencil<S> a_shift_times_z(const Basis<S>& b, long m) {
    const S inv = checked_inverse(b.s0, m, "s0");
    const S am = b.alpha(m);
    return {{-1, (am - b.gamma0) * inv}, {0, (b.gamma0 - S(2) * am) * inv}, {1, am * inv}};
}

/// Multiplies sum_j c_j u_{n+j} by z under the a-shift pattern.
template <Scalar S>
ShiftStencil<S> a_shift_multiply_z(const Basis<S>& b, long n, const ShiftStencil<S>& st) {
    ShiftStencil<S> out;
    for (const auto& [j, c] : st.entries())
        out.accumulate(a_shift_times_z(b, n + j), c, j);
    return out;
}

} // namespace detail

/// Joint relation of the both-shift pattern: z (u_n' - s0 u_n) =
/// (gamma_n - 1)(u_{n-1} - u_n). z u_n alone has no finite expansion.
template <Scalar S>
ShiftStencil<S> reduce_joint(const Basis<S>& basis, long n) {
    if (basis.pattern != ShiftPattern::BothShift)
        fail(ErrorKind::InvalidArgument, "joint relation applies to the both-shift pattern only");
    const S g = basis.gamma(n) - S(1);
    return {{-1, g}, {0, -g}};
}

/// z^k u_n^(d) = sum_j c_j u_{n+j} (the coefficient of `term` is applied).
template <Scalar S>
ShiftStencil<S> reduce_term(const Basis<S>& basis, long n, const SymTerm<S>& term) {
    if (term.d > 1)
        fail(ErrorKind::InvalidArgument, "second derivatives must be eliminated first");
    const auto irreducible = [&]() -> ShiftStencil<S> {
        fail(ErrorKind::Irreducible, detail::monomial_name(term.k, term.d) + " is not a finite combination of " +
                                         std::string(to_string(basis.pattern)) + " functions");
    };
    const S an = basis.alpha(n);
    const S gn = basis.gamma(n);
    ShiftStencil<S> st;
    if (term.k == 0 && term.d == 0) {
        st.add(0, S(1));
        return st.scaled(term.coeff);
    }
    switch (basis.pattern) {
    case ShiftPattern::BothShift:
        if (term.k == 0 && term.d == 1) {
            st.add(1, basis.s0 * an * detail::checked_inverse(gn, n, "gamma_n"));
            return st.scaled(term.coeff);
        }
        return irreducible();
    case ShiftPattern::AShift: {
        if (term.d == 1 && term.k == 0)
            return irreducible();
        unsigned remaining = term.k;
        if (term.d == 1) {
            st = {{0, -an}, {1, an}};
            --remaining;
        } else {
            st.add(0, S(1));
        }
        for (; remaining > 0; --remaining)
            st = detail::a_shift_multiply_z(basis, n, st);
        return st.scaled(term.coeff);
    }
    case ShiftPattern::BShift:
        if (term.d == 1 && term.k == 1) {
            st = {{-1, gn - S(1)}, {0, S(1) - gn}};
            return st.scaled(term.coeff);
        }
        if (term.d == 1 && term.k == 0) {
            const S tail = S(1) - basis.alpha0 * detail::checked_inverse(gn, n, "gamma_n");
            st = {{0, basis.s0}, {1, -basis.s0 * tail}};
            return st.scaled(term.coeff);
        }
        return irreducible();
    }
    return irreducible();
}

/// Column form of the recurrence: L[u_n] = sum_j c_j(n) u_{n+j}.
///
/// The named recurrence coefficients at index n are exactly these entries,
/// e.g. for a three-term family {-1: R_n, 0: Q_n, +1: P_n}.
template <Scalar S>
ShiftStencil<S> derive_stencil(const PolyOde<S>& ode, const Basis<S>& basis, long n) {
    const auto elim = eliminate_second_derivative(ode, basis, n);
    double scale = 0.0;
    for (const auto& t : elim.terms)
        scale = std::max(scale, magnitude(t.coeff));

    const auto residual = [&](const std::string& what) {
        fail(ErrorKind::IrreducibleResidual,
             "irreducible residual: " + what + " coefficient nonzero at n = " + std::to_string(n) + " (" +
                 basis.describe() + ")");
    };

    ShiftStencil<S> out;
    S zu_leftover(0);
    for (const auto& t : elim.terms) {
        if (is_zero(t.coeff))
            continue;
        if (basis.pattern == ShiftPattern::BothShift) {
            if (t.d == 1 && t.k == 1) {
                out.accumulate(reduce_joint(basis, n), t.coeff);
                zu_leftover += basis.s0 * t.coeff;
                continue;
            }
            if (t.d == 0 && t.k == 1) {
                zu_leftover += t.coeff;
                continue;
            }
        }
        try {
            out.accumulate(reduce_term(basis, n, t), S(1));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Irreducible)
                throw;
            if (!negligible(t.coeff, scale))
                residual(detail::monomial_name(t.k, t.d));
        }
    }
    if (!negligible(zu_leftover, scale))
        residual("z*u_n");
    return out;
}

/// Offsets spanned by the stencils of a given ODE/basis pair, taken as the
/// union over a few generic indices so that accidental zeros at one n do not
/// shrink it.
template <Scalar S>
std::pair<int, int> stencil_window(const PolyOde<S>& ode, const Basis<S>& basis) {
    int lo = 0, hi = 0;
    bool any = false;
    int found = 0;
    std::optional<Error> last;
    for (long n = 1; n <= 12 && found < 3; ++n) {
        try {
            const auto st = derive_stencil(ode, basis, n);
            if (st.empty())
                continue;
            lo = any ? std::min(lo, st.min_offset()) : st.min_offset();
            hi = any ? std::max(hi, st.max_offset()) : st.max_offset();
            any = true;
            ++found;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::DivisionByZero)
                throw;
            last = e;
        }
    }
    if (!any) {
        if (last)
            throw *last;
        fail(ErrorKind::InvalidArgument, "empty stencil");
    }
    return {lo, hi};
}

/// Row form at index n: entries[i] multiplies a_{n-i}, i = 0..width-1, so
/// entries[i] = c_{lo+i}(n-i). Entries that would divide by zero at a
/// negative source index are left empty.
template <Scalar S>
struct RecurrenceRow {
    long n = 0;
    int leading_offset = 0;
    std::vector<std::optional<S>> entries;
};

template <Scalar S>
RecurrenceRow<S> derive_recurrence(const PolyOde<S>& ode, const Basis<S>& basis, long n,
                                   std::optional<std::pair<int, int>> window = std::nullopt) {
    const auto [lo, hi] = window ? *window : stencil_window(ode, basis);
    RecurrenceRow<S> row{n, lo, {}};
    for (int i = 0; i <= hi - lo; ++i) {
        try {
            row.entries.push_back(derive_stencil(ode, basis, n - i).at(lo + i));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::DivisionByZero || n - i >= 0)
                throw;
            row.entries.push_back(std::nullopt);
        }
    }
    return row;
}

/// Stencil whose entries are polynomials in z: only derivatives are rewritten
/// (u_n' = s0 alpha_n/gamma_n u_{n+1}); the powers z^k u_m are kept. A
/// coefficient sequence then has to annihilate every z-power of every
/// grouped entry separately.
template <Scalar S>
using GroupedStencil = std::map<int, Polynomial<S>>;

template <Scalar S>
GroupedStencil<S> derive_grouped_stencil(const PolyOde<S>& ode, const Basis<S>& basis, long n) {
    if (basis.pattern != ShiftPattern::BothShift)
        fail(ErrorKind::InvalidArgument, "grouped derivation is implemented for the both-shift pattern");
    const auto elim = eliminate_second_derivative(ode, basis, n);
    GroupedStencil<S> out;
    out[0] = elim.u_coeff;
    const S ratio_n = basis.s0 * basis.alpha(n) * detail::checked_inverse(basis.gamma(n), n, "gamma_n");
    out[1] = elim.du_coeff * ratio_n;
    return out;
}

template <Scalar S>
struct DerivationEntry {
    long n = 0;
    std::optional<ShiftStencil<S>> column;
    std::optional<RecurrenceRow<S>> row;
    unsigned clearing_power = 0;
    std::string diagnostic;
};

template <Scalar S>
struct DerivationReport {
    std::string ode;
    std::string basis;
    std::optional<std::pair<int, int>> window;
    std::string diagnostic;
    std::vector<DerivationEntry<S>> entries;

    bool ok() const {
        if (!window)
            return false;
        return std::all_of(entries.begin(), entries.end(),
                           [](const auto& e) { return e.diagnostic.empty(); });
    }
};

/// Derivation of every row in [n_first, n_last], collecting failures as
/// diagnostics instead of throwing.
template <Scalar S>
DerivationReport<S> derive_report(const PolyOde<S>& ode, const Basis<S>& basis, long n_first, long n_last) {
    DerivationReport<S> rep{ode.description, basis.describe(), std::nullopt, {}, {}};
    try {
        rep.window = stencil_window(ode, basis);
    } catch (const Error& e) {
        rep.diagnostic = e.what();
        return rep;
    }
    for (long n = n_first; n <= n_last; ++n) {
        DerivationEntry<S> entry;
        entry.n = n;
        try {
            entry.clearing_power = eliminate_second_derivative(ode, basis, n).clearing_power;
            entry.column = derive_stencil(ode, basis, n);
            entry.row = derive_recurrence(ode, basis, n, rep.window);
        } catch (const Error& e) {
            entry.diagnostic = e.what();
        }
        rep.entries.push_back(std::move(entry));
    }
    return rep;
}

} // namespace dche
