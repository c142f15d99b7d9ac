#pragma once

#include "scalar.hpp"

#include <string>

namespace dche {

/// Parameters of u'' + (delta/z^2 + gamma/z + epsilon) u' + (alpha z - q)/z^2 u = 0.
template <Scalar S>
struct DcheParams {
    S alpha{0};
    S gamma{0};
    S delta{0};
    S epsilon{1};
    S q{0};

    DcheParams with_q(const S& value) const {
        DcheParams p = *this;
        p.q = value;
        return p;
    }

    std::string describe() const {
        return "alpha=" + to_string(alpha) + " gamma=" + to_string(gamma) +
               " delta=" + to_string(delta) + " epsilon=" + to_string(epsilon) +
               " q=" + to_string(q);
    }
};

template <Scalar To, Scalar From>
DcheParams<To> convert_params(const DcheParams<From>& p) {
    return {convert<To>(p.alpha), convert<To>(p.gamma), convert<To>(p.delta),
            convert<To>(p.epsilon), convert<To>(p.q)};
}

} // namespace dche
