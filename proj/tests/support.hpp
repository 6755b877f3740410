#pragma once

#include <vector>

#include "muntz/poly.hpp"
#include "oracles.hpp"

inline muntz::MuntzPoly to_poly(const oracle::Expansion& f) {
    std::vector<muntz::Term> terms;
    for (const oracle::Mono& m : f) terms.push_back({m.e, m.a});
    return muntz::MuntzPoly(std::move(terms));
}

inline oracle::Expansion to_expansion(const muntz::MuntzPoly& f) {
    oracle::Expansion out;
    for (const muntz::Term& t : f.terms()) out.push_back({t.exponent, t.coefficient});
    return out;
}
