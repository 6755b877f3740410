#pragma once

// Certified sup-norm and exact L1-norm of Muntz polynomials on [0, 1].
//
// Zeros are isolated by descending through derivatives (Rolle): for
// h = sum_k c_k x^{e_k} with e_0 = 0, the function x^{1-e_1} h' has one term
// fewer, and h is monotone between consecutive sign changes of it.  Each
// monotone piece holds at most one zero, located by bisection.  The recursion
// bottoms out at a single term, which has no zero in (0, 1).  No sampling is
// involved, so no sign change can be missed, and the root count is at most
// term count - 1 by construction.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "muntz/poly.hpp"

namespace muntz {

/// One isolated sign change: the zero lies in [lo, hi].
struct Root {
    UnitPoint lo;
    UnitPoint hi;

    double width() const {
        if (hi.x <= 0.5) return hi.x - lo.x;
        if (lo.x >= 0.5) return lo.t - hi.t;
        return hi.x - lo.x;
    }
    UnitPoint center() const;
    double point() const { return center().x; }
};

/// Sign changes of f on (0, 1), strictly increasing.
using RootList = std::vector<Root>;

struct NormResult {
    double value = 0.0;
    std::optional<double> argmax;  // sup-norm only
    double error_radius = 0.0;
};

namespace detail {

inline UnitPoint midpoint(const UnitPoint& lo, const UnitPoint& hi) {
    if (hi.x <= 0.5) return UnitPoint::from_x(0.5 * (lo.x + hi.x));
    if (lo.x >= 0.5) return UnitPoint::from_complement(0.5 * (lo.t + hi.t));
    return UnitPoint::from_x(0.5);
}

inline int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

inline double eval_terms(std::span<const Term> terms, const UnitPoint& p) {
    double sum = 0.0;
    for (const Term& term : terms) sum += term.coefficient * unit_power(p, term.exponent);
    return sum;
}

// Shifts exponents so the least one is 0; zeros on (0, 1) are unchanged.
inline std::vector<Term> shifted_to_zero(std::span<const Term> terms) {
    std::vector<Term> out(terms.begin(), terms.end());
    if (out.empty()) return out;
    const double shift = out.front().exponent;
    for (Term& term : out) term.exponent -= shift;
    out.front().exponent = 0.0;
    return out;
}

// x^{1 - e_1} d/dx of sum c_k x^{e_k} (e_0 = 0): drops the constant and
// renormalizes so the least exponent is again 0.
inline std::vector<Term> reduced_derivative(std::span<const Term> terms) {
    std::vector<Term> out;
    if (terms.size() < 2) return out;
    const double shift = terms[1].exponent;
    for (std::size_t k = 1; k < terms.size(); ++k) {
        out.push_back({terms[k].exponent - shift, terms[k].coefficient * terms[k].exponent});
    }
    out.front().exponent = 0.0;
    return out;
}

inline Root bisect(std::span<const Term> terms, UnitPoint lo, UnitPoint hi, int lo_sign, double tol) {
    Root root{lo, hi};
    for (int iter = 0; iter < 4096; ++iter) {
        if (tol > 0.0 && root.width() <= tol) break;
        const UnitPoint mid = midpoint(root.lo, root.hi);
        if (mid.near_one() ? (mid.t == root.lo.t || mid.t == root.hi.t)
                           : (mid.x == root.lo.x || mid.x == root.hi.x)) {
            break;
        }
        const int s = sign_of(eval_terms(terms, mid));
        if (s == 0) return Root{mid, mid};
        if (s == lo_sign) {
            root.lo = mid;
        } else {
            root.hi = mid;
        }
    }
    return root;
}

// Sign changes on (0, 1) of sum c_k x^{e_k}, terms sorted with e_0 = 0.
// tol <= 0 bisects to the resolution of the working coordinate.
inline RootList sign_changes(std::span<const Term> terms, double tol) {
    RootList roots;
    if (terms.size() < 2) return roots;

    const std::vector<Term> deriv = reduced_derivative(terms);
    const RootList critical = sign_changes(deriv, tol);

    std::vector<UnitPoint> breaks;
    breaks.reserve(critical.size() + 2);
    breaks.push_back(UnitPoint::from_x(0.0));
    for (const Root& r : critical) breaks.push_back(r.center());
    breaks.push_back(UnitPoint::from_complement(0.0));

    std::vector<int> signs;
    signs.reserve(breaks.size());
    for (const UnitPoint& p : breaks) signs.push_back(sign_of(eval_terms(terms, p)));

    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (i > 0 && signs[i] == 0 && signs[i - 1] * signs[i + 1] < 0) {
            roots.push_back(Root{breaks[i], breaks[i]});
        }
        if (signs[i] * signs[i + 1] < 0) {
            roots.push_back(bisect(terms, breaks[i], breaks[i + 1], signs[i], tol));
        }
    }
    return roots;
}

// Zeros on (0, 1) of f'.  Exponents of f' may be negative; shifting fixes that.
inline RootList critical_points(const MuntzPoly& f, double tol) {
    std::vector<Term> deriv;
    for (const Term& term : f.terms()) {
        if (term.exponent != 0.0) deriv.push_back({term.exponent - 1.0, term.coefficient * term.exponent});
    }
    const std::vector<Term> shifted = shifted_to_zero(deriv);
    return sign_changes(shifted, tol);
}

inline double derivative_at(const MuntzPoly& f, const UnitPoint& p) {
    double sum = 0.0;
    for (const Term& term : f.terms()) {
        if (term.exponent != 0.0) {
            sum += term.coefficient * term.exponent * unit_power(p, term.exponent - 1.0);
        }
    }
    return sum;
}

inline double roundoff_bound(const MuntzPoly& f) {
    return 8.0 * std::numeric_limits<double>::epsilon() * f.coefficient_l1();
}

}  // namespace detail

inline UnitPoint Root::center() const { return detail::midpoint(lo, hi); }

/// Sign changes of f on (0, 1), each bracketed to width <= tol.
inline RootList isolate_zeros(const MuntzPoly& f, double tol) {
    if (f.is_zero()) throw std::domain_error("isolate_zeros: zero polynomial");
    if (!(tol > 0.0)) throw std::domain_error("isolate_zeros: tol must be positive");
    const std::vector<Term> shifted = detail::shifted_to_zero(f.terms());
    RootList roots = detail::sign_changes(shifted, tol);
    if (roots.size() + 1 > f.size()) {
        throw std::logic_error("isolate_zeros: root count exceeds the Descartes budget");
    }
    return roots;
}

/// max |f| over [a, b] within [0, 1]; argmax is the leftmost maximizer.
inline NormResult sup_norm_on(const MuntzPoly& f, double a, double b) {
    if (!(0.0 <= a && a <= b && b <= 1.0)) throw std::domain_error("sup_norm_on: need 0 <= a <= b <= 1");
    if (f.is_zero()) return {0.0, a, 0.0};

    struct Candidate {
        UnitPoint at;
        double width = 0.0;
    };
    std::vector<Candidate> candidates;
    candidates.push_back({UnitPoint::from_x(a), 0.0});
    for (const Root& r : detail::critical_points(f, 0.0)) {
        const UnitPoint c = r.center();
        const bool below_b = b == 1.0 ? c.t > 0.0 : c.x < b;
        if (c.x > a && below_b) candidates.push_back({c, r.width()});
    }
    candidates.push_back({b == 1.0 ? UnitPoint::from_complement(0.0) : UnitPoint::from_x(b), 0.0});

    NormResult result{-1.0, a, 0.0};
    double width_at_best = 0.0;
    UnitPoint best = candidates.front().at;
    for (const Candidate& c : candidates) {
        const double v = std::abs(f.eval(c.at));
        if (v > result.value) {
            result.value = v;
            result.argmax = c.at.x;
            best = c.at;
            width_at_best = c.width;
        }
    }
    // A bracketed critical point may sit up to width away from the true one.
    double slope = 0.0;
    if (width_at_best > 0.0) slope = std::abs(detail::derivative_at(f, best));
    result.error_radius = width_at_best * slope + detail::roundoff_bound(f);
    return result;
}

/// max |f| over [0, 1], from the endpoints and all interior critical points.
inline NormResult sup_norm(const MuntzPoly& f) {
    if (f.is_zero()) return {0.0, 0.0, 0.0};
    return sup_norm_on(f, 0.0, 1.0);
}

/// Integral of |f| over [0, 1]: alternating sum of the exact primitive between
/// consecutive sign changes.
inline NormResult l1_norm(const MuntzPoly& f) {
    if (f.is_zero()) return {0.0, std::nullopt, 0.0};
    const std::vector<Term> shifted = detail::shifted_to_zero(f.terms());
    const RootList roots = detail::sign_changes(shifted, 0.0);
    const MuntzPoly primitive = antiderivative(f);

    std::vector<UnitPoint> breaks;
    breaks.push_back(UnitPoint::from_x(0.0));
    double total_width = 0.0;
    for (const Root& r : roots) {
        breaks.push_back(r.center());
        total_width += r.width();
    }
    breaks.push_back(UnitPoint::from_complement(0.0));

    double value = 0.0;
    double previous = primitive.eval(breaks.front());
    for (std::size_t i = 1; i < breaks.size(); ++i) {
        const double current = primitive.eval(breaks[i]);
        value += std::abs(current - previous);
        previous = current;
    }
    const double sup = total_width > 0.0 ? sup_norm(f).value : 0.0;
    const double error = total_width * sup +
                         double(breaks.size()) * 2.0 * detail::roundoff_bound(primitive);
    return {value, std::nullopt, error};
}

/// f / ||f||_1.
inline MuntzPoly normalize_l1(const MuntzPoly& f) {
    if (f.is_zero()) throw std::domain_error("normalize_l1: zero polynomial");
    const double norm = l1_norm(f).value;
    if (!(norm > 0.0)) throw std::domain_error("normalize_l1: vanishing L1 norm");
    return scale(1.0 / norm, f);
}

}  // namespace muntz
