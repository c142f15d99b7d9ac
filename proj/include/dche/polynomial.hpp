#pragma once

#include "scalar.hpp"

#include <algorithm>
#include <initializer_list>
#include <string>
#include <vector>

namespace dche {

/// Dense univariate polynomial, coefficients stored in ascending powers.
/// Trailing zero coefficients are trimmed so that degree() is meaningful.
template <Scalar S>
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(std::initializer_list<S> coeffs) : c_(coeffs) { trim(); }
    explicit Polynomial(std::vector<S> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Polynomial constant(const S& value) { return Polynomial({value}); }

    static Polynomial monomial(std::size_t power, const S& coeff = S(1)) {
        std::vector<S> c(power + 1, S(0));
        c[power] = coeff;
        return Polynomial(std::move(c));
    }

    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<S>& coefficients() const { return c_; }

    S coeff(std::size_t k) const { return k < c_.size() ? c_[k] : S(0); }

    template <Scalar T = S>
    T operator()(const T& x) const {
        T acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            acc = acc * x + convert<T>(*it);
        return acc;
    }

    Polynomial derivative() const {
        if (c_.size() <= 1)
            return {};
        std::vector<S> d(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k)
            d[k - 1] = c_[k] * S(static_cast<long long>(k));
        return Polynomial(std::move(d));
    }

    Polynomial& operator+=(const Polynomial& o) {
        if (o.c_.size() > c_.size())
            c_.resize(o.c_.size(), S(0));
        for (std::size_t k = 0; k < o.c_.size(); ++k)
            c_[k] += o.c_[k];
        trim();
        return *this;
    }

    Polynomial& operator-=(const Polynomial& o) {
        if (o.c_.size() > c_.size())
            c_.resize(o.c_.size(), S(0));
        for (std::size_t k = 0; k < o.c_.size(); ++k)
            c_[k] -= o.c_[k];
        trim();
        return *this;
    }

    Polynomial& operator*=(const S& s) {
        for (auto& x : c_)
            x *= s;
        trim();
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const S& s) { return a *= s; }
    friend Polynomial operator*(const S& s, Polynomial a) { return a *= s; }
    friend Polynomial operator-(Polynomial a) { return a *= S(-1); }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero())
            return {};
        std::vector<S> r(a.c_.size() + b.c_.size() - 1, S(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                r[i + j] += a.c_[i] * b.c_[j];
        return Polynomial(std::move(r));
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

    /// Exact division by z^k; the low coefficients must already vanish.
    Polynomial shifted_down(std::size_t k) const {
        if (k >= c_.size())
            return {};
        return Polynomial(std::vector<S>(c_.begin() + static_cast<std::ptrdiff_t>(k), c_.end()));
    }

    std::string to_string(const std::string& var = "z") const {
        if (c_.empty())
            return "0";
        std::string out;
        for (std::size_t k = 0; k < c_.size(); ++k) {
            if (dche::is_zero(c_[k]))
                continue;
            if (!out.empty())
                out += " + ";
            out += "(" + dche::to_string(c_[k]) + ")";
            if (k >= 1)
                out += "*" + var;
            if (k >= 2)
                out += "^" + std::to_string(k);
        }
        return out.empty() ? "0" : out;
    }

private:
    void trim() {
        while (!c_.empty() && dche::is_zero(c_.back()))
            c_.pop_back();
    }

    std::vector<S> c_;
};

template <Scalar To, Scalar From>
Polynomial<To> convert_polynomial(const Polynomial<From>& p) {
    std::vector<To> c;
    c.reserve(p.coefficients().size());
    for (const auto& x : p.coefficients())
        c.push_back(convert<To>(x));
    return Polynomial<To>(std::move(c));
}

} // namespace dche
