#pragma once

// JSON records for series and spectra, and scalar literal parsing. Complex
// values are {"re", "im"} objects; rationals are "p/q" strings so that exact
// output stays exact.

#include "error.hpp"
#include "expansions.hpp"
#include "family.hpp"
#include "scalar.hpp"
#include "termination.hpp"

#include <json.hpp>

#include <cctype>
#include <string>
#include <string_view>

namespace dche {

using Json = nlohmann::ordered_json;

namespace detail {

inline std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return std::string(s);
}

} // namespace detail

/// Exact value of an integer, p/q, or decimal literal with optional exponent.
inline Rational parse_rational(std::string_view text) {
    const std::string s = detail::trim(text);
    if (s.empty())
        fail(ErrorKind::InvalidArgument, "empty number");
    if (const auto slash = s.find('/'); slash != std::string::npos) {
        const Rational num = parse_rational(s.substr(0, slash));
        const Rational den = parse_rational(s.substr(slash + 1));
        if (den == 0)
            fail(ErrorKind::InvalidArgument, "zero denominator in '" + s + "'");
        return num / den;
    }
    std::size_t i = 0;
    bool negative = false;
    if (s[i] == '+' || s[i] == '-')
        negative = s[i++] == '-';
    std::string digits;
    long long exponent = 0;
    bool seen_digit = false, seen_point = false;
    for (; i < s.size(); ++i) {
        const char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digits += c;
            seen_digit = true;
            if (seen_point)
                --exponent;
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else if ((c == 'e' || c == 'E') && seen_digit) {
            try {
                std::size_t used = 0;
                exponent += std::stoll(s.substr(i + 1), &used);
                if (used != s.size() - i - 1)
                    throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                fail(ErrorKind::InvalidArgument, "malformed exponent in '" + s + "'");
            }
            i = s.size();
            break;
        } else {
            fail(ErrorKind::InvalidArgument, "not a rational literal: '" + s + "'");
        }
    }
    if (!seen_digit)
        fail(ErrorKind::InvalidArgument, "not a rational literal: '" + s + "'");
    if (exponent > 4000 || exponent < -4000)
        fail(ErrorKind::InvalidArgument, "exponent out of range in '" + s + "'");
    Rational value{Integer(digits)};
    const Integer ten_power = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(std::abs(exponent)));
    value = exponent >= 0 ? value * Rational(ten_power) : value / Rational(ten_power);
    return negative ? Rational(-value) : value;
}

/// "re" or "re,im".
inline Complex parse_complex(std::string_view text) {
    const std::string s = detail::trim(text);
    const auto comma = s.find(',');
    const auto part = [&](const std::string& p) {
        try {
            std::size_t used = 0;
            const double v = std::stod(p, &used);
            if (detail::trim(p.substr(used)).size() != 0 || !std::isfinite(v))
                throw std::invalid_argument("bad");
            return v;
        } catch (const std::exception&) {
            if (p.find('/') != std::string::npos)
                return parse_rational(p).convert_to<double>();
            fail(ErrorKind::InvalidArgument, "not a number: '" + p + "'");
        }
    };
    if (comma == std::string::npos)
        return {part(s), 0.0};
    return {part(s.substr(0, comma)), part(s.substr(comma + 1))};
}

template <Scalar S>
S parse_scalar(std::string_view text) {
    if constexpr (is_exact_v<S>) {
        const std::string s = detail::trim(text);
        if (const auto comma = s.find(','); comma != std::string::npos) {
            if (parse_rational(s.substr(comma + 1)) != 0)
                fail(ErrorKind::InvalidArgument, "exact mode needs real rational input, got '" + s + "'");
            return parse_rational(s.substr(0, comma));
        }
        return parse_rational(s);
    } else {
        return parse_complex(text);
    }
}

inline Json to_json(const Complex& z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }
inline Json to_json(const Rational& x) { return x.str(); }

template <Scalar S>
S scalar_from_json(const Json& j) {
    if constexpr (is_exact_v<S>) {
        if (!j.is_string())
            fail(ErrorKind::InvalidArgument, "exact scalar must be a \"p/q\" string");
        return parse_rational(j.get<std::string>());
    } else {
        if (j.is_object())
            return {j.at("re").get<double>(), j.at("im").get<double>()};
        if (j.is_number())
            return {j.get<double>(), 0.0};
        fail(ErrorKind::InvalidArgument, "float scalar must be {re, im}");
    }
}

template <Scalar S>
Json params_to_json(const DcheParams<S>& p) {
    return Json{{"alpha", to_json(p.alpha)},
                {"gamma", to_json(p.gamma)},
                {"delta", to_json(p.delta)},
                {"epsilon", to_json(p.epsilon)},
                {"q", to_json(p.q)}};
}

template <Scalar S>
DcheParams<S> params_from_json(const Json& j) {
    return {scalar_from_json<S>(j.at("alpha")), scalar_from_json<S>(j.at("gamma")), scalar_from_json<S>(j.at("delta")),
            scalar_from_json<S>(j.at("epsilon")), scalar_from_json<S>(j.at("q"))};
}

template <Scalar S>
Json stencil_to_json(const ShiftStencil<S>& st) {
    Json j = Json::object();
    for (const auto& [off, c] : st.entries())
        j[std::to_string(off)] = to_json(c);
    return j;
}

template <Scalar S>
ShiftStencil<S> stencil_from_json(const Json& j) {
    ShiftStencil<S> st;
    for (const auto& [key, value] : j.items())
        st.add(std::stoi(key), scalar_from_json<S>(value));
    return st;
}

template <Scalar S>
Json to_json(const SeriesSolution<S>& sol) {
    const auto& inst = sol.instance;
    Json coeffs = Json::array();
    for (const auto& a : sol.coefficients)
        coeffs.push_back(to_json(a));
    Json cols = Json::array();
    for (std::size_t n = 0; n < sol.columns.size(); ++n)
        cols.push_back(Json{{"n", n}, {"entries", stencil_to_json(sol.columns[n])}});
    Json notes = Json::array();
    for (const auto& s : inst.notes)
        notes.push_back(s);
    return Json{{"family", std::string(to_string(inst.family))},
                {"mode", scalar_traits<S>::name},
                {"source", std::string(to_string(inst.source))},
                {"target", std::string(to_string(inst.target))},
                {"parameters", params_to_json(inst.params)},
                {"basis",
                 Json{{"pattern", std::string(to_string(inst.basis.pattern))},
                      {"alpha0", to_json(inst.basis.alpha0)},
                      {"gamma0", to_json(inst.basis.gamma0)},
                      {"s0", to_json(inst.basis.s0)}}},
                {"reflected", inst.reflected},
                {"notes", notes},
                {"window", Json::array({sol.window.first, sol.window.second})},
                {"terminated_at", sol.terminated_at ? Json(*sol.terminated_at) : Json(nullptr)},
                {"coefficients", coeffs},
                {"stencils", cols}};
}

template <Scalar S>
SeriesSolution<S> series_from_json(const Json& j) {
    if (j.at("mode").get<std::string>() != scalar_traits<S>::name)
        fail(ErrorKind::InvalidArgument, "series record mode does not match the requested scalar");
    SeriesSolution<S> sol;
    auto& inst = sol.instance;
    const auto fam = parse_family(j.at("family").get<std::string>());
    if (!fam)
        fail(ErrorKind::InvalidArgument, "unknown family in series record");
    inst.family = *fam;
    inst.source = j.at("source").get<std::string>() == "engine" ? StencilSource::Engine : StencilSource::ClosedForm;
    inst.target = j.at("target").get<std::string>() == "v-equation" ? Target::VEquation : Target::UEquation;
    inst.params = params_from_json<S>(j.at("parameters"));
    const auto& b = j.at("basis");
    const auto pattern = b.at("pattern").get<std::string>();
    inst.basis.pattern = pattern == "a-shift"   ? ShiftPattern::AShift
                         : pattern == "b-shift" ? ShiftPattern::BShift
                                                : ShiftPattern::BothShift;
    inst.basis.alpha0 = scalar_from_json<S>(b.at("alpha0"));
    inst.basis.gamma0 = scalar_from_json<S>(b.at("gamma0"));
    inst.basis.s0 = scalar_from_json<S>(b.at("s0"));
    inst.reflected = j.at("reflected").get<bool>();
    for (const auto& s : j.at("notes"))
        inst.notes.push_back(s.get<std::string>());
    sol.window = {j.at("window").at(0).get<int>(), j.at("window").at(1).get<int>()};
    if (!j.at("terminated_at").is_null())
        sol.terminated_at = j.at("terminated_at").get<long>();
    for (const auto& a : j.at("coefficients"))
        sol.coefficients.push_back(scalar_from_json<S>(a));
    for (const auto& c : j.at("stencils"))
        sol.columns.push_back(stencil_from_json<S>(c.at("entries")));
    return sol;
}

inline Json optional_number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

inline double number_or_nan(const Json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

template <Scalar S>
Json to_json(const QSpectrum<S>& sp) {
    Json poly = Json::array();
    for (const auto& c : sp.polynomial.coefficients())
        poly.push_back(to_json(c));
    Json roots = Json::array();
    for (const auto& r : sp.roots) {
        roots.push_back(Json{{"q", to_json(r.q)},
                             {"multiplicity", r.multiplicity},
                             {"exact", r.exact ? Json(*r.exact) : Json(nullptr)},
                             {"a_next", optional_number(r.a_next)},
                             {"a_next2", optional_number(r.a_next2)},
                             {"residual", optional_number(r.residual)},
                             {"exact_residual_zero",
                              r.exact_residual_zero ? Json(*r.exact_residual_zero) : Json(nullptr)},
                             {"form", r.form},
                             {"certified", r.certified},
                             {"note", r.note}});
    }
    return Json{{"family", std::string(to_string(sp.family))},
                {"mode", scalar_traits<S>::name},
                {"N", sp.N},
                {"condition", sp.condition},
                {"polynomial", poly},
                {"method", sp.method},
                {"stalled", sp.stalled},
                {"roots", roots}};
}

template <Scalar S>
QSpectrum<S> qspectrum_from_json(const Json& j) {
    if (j.at("mode").get<std::string>() != scalar_traits<S>::name)
        fail(ErrorKind::InvalidArgument, "spectrum record mode does not match the requested scalar");
    QSpectrum<S> sp;
    const auto fam = parse_family(j.at("family").get<std::string>());
    if (!fam)
        fail(ErrorKind::InvalidArgument, "unknown family in spectrum record");
    sp.family = *fam;
    sp.N = j.at("N").get<long>();
    sp.condition = j.at("condition").get<std::string>();
    std::vector<S> c;
    for (const auto& x : j.at("polynomial"))
        c.push_back(scalar_from_json<S>(x));
    sp.polynomial = Polynomial<S>(std::move(c));
    sp.method = j.at("method").get<std::string>();
    sp.stalled = j.at("stalled").get<bool>();
    for (const auto& r : j.at("roots")) {
        RootCertificate rc;
        rc.q = scalar_from_json<Complex>(r.at("q"));
        rc.multiplicity = r.at("multiplicity").get<unsigned>();
        if (!r.at("exact").is_null())
            rc.exact = r.at("exact").get<std::string>();
        rc.a_next = number_or_nan(r.at("a_next"));
        rc.a_next2 = number_or_nan(r.at("a_next2"));
        rc.residual = number_or_nan(r.at("residual"));
        if (!r.at("exact_residual_zero").is_null())
            rc.exact_residual_zero = r.at("exact_residual_zero").get<bool>();
        rc.form = r.at("form").get<std::string>();
        rc.certified = r.at("certified").get<bool>();
        rc.note = r.at("note").get<std::string>();
        sp.roots.push_back(std::move(rc));
    }
    return sp;
}

} // namespace dche
