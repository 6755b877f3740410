#pragma once

// Closed-form Volterra, Cesaro, division and weighted H_q operators on finite
// Muntz polynomials, together with the rank-one approximants S, R, R1, the
// truncated operator T_rho and the coefficient functionals e_n.

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "muntz/norms.hpp"
#include "muntz/poly.hpp"

namespace muntz {

/// A continuous weight q on [0, 1], restricted to Muntz-polynomial form.
class Weight {
public:
    explicit Weight(MuntzPoly q) : q_(std::move(q)) {}

    static Weight one() { return Weight(MuntzPoly::constant(1.0)); }
    static Weight identity() { return Weight(MuntzPoly::monomial(1.0)); }

    const MuntzPoly& poly() const { return q_; }
    double at_one() const { return q_.eval(UnitPoint::from_complement(0.0)); }
    double sup() const { return sup_norm(q_).value; }

private:
    MuntzPoly q_;
};

/// V f = int_0^x f.
inline MuntzPoly volterra(const MuntzPoly& f) { return antiderivative(f); }

/// Gamma f = (1/x) int_0^x f, i.e. sum a_k x^{lambda_k} / (lambda_k + 1).
inline MuntzPoly cesaro(const MuntzPoly& f) {
    std::vector<Term> terms;
    terms.reserve(f.size());
    for (const Term& term : f.terms()) {
        terms.push_back({term.exponent, term.coefficient / (term.exponent + 1.0)});
    }
    return MuntzPoly(std::move(terms));
}

/// Q f = f / x, defined only when every exponent is at least 1.
inline MuntzPoly division_q(const MuntzPoly& f) {
    if (f.is_zero()) return {};
    if (f.least_exponent() < 1.0) {
        throw std::domain_error("division_q: least exponent " + std::to_string(f.least_exponent()) +
                                " is below 1");
    }
    std::vector<Term> terms;
    terms.reserve(f.size());
    for (const Term& term : f.terms()) {
        terms.push_back({std::max(term.exponent - 1.0, 0.0), term.coefficient});
    }
    return MuntzPoly(std::move(terms));
}

/// H_q f = (q(x)/x) int_0^x f; q = 1 gives Gamma, q = x gives V.
inline MuntzPoly weighted_hq(const Weight& q, const MuntzPoly& f) { return multiply(q.poly(), cesaro(f)); }

/// Integral of f over [0, 1].
inline double unit_integral(const MuntzPoly& f) { return f.integral(); }

/// One of the rank-one operators used as compact approximants:
///   S  f = (1/2) int f
///   R  f = (int f) q x^lambda / 2, lambda a member of Lambda
///   R1 f = q(1) (int f) / 2
class FiniteRankSpec {
public:
    enum class Variant { S, R, R1 };

    static FiniteRankSpec s() { return FiniteRankSpec(Variant::S, Weight::one(), 0.0); }

    /// lambda must belong to the materialized exponent set.
    static FiniteRankSpec r(Weight q, double lambda, std::span<const double> lambda_set) {
        bool member = false;
        for (double e : lambda_set) member = member || std::abs(e - lambda) < kExponentMergeTolerance;
        if (!member) {
            throw std::domain_error("FiniteRankSpec::r: lambda = " + std::to_string(lambda) +
                                    " is not in the exponent set");
        }
        return FiniteRankSpec(Variant::R, std::move(q), lambda);
    }

    static FiniteRankSpec r1(Weight q) { return FiniteRankSpec(Variant::R1, std::move(q), 0.0); }

    Variant variant() const { return variant_; }
    const Weight& weight() const { return q_; }
    double lambda() const { return lambda_; }

    /// Every variant has rank one; this is the function spanning the range.
    MuntzPoly range_generator() const {
        switch (variant_) {
            case Variant::S: return MuntzPoly::constant(0.5);
            case Variant::R: return multiply(q_.poly(), MuntzPoly::monomial(lambda_, 0.5));
            case Variant::R1: return MuntzPoly::constant(0.5 * q_.at_one());
        }
        return {};
    }

private:
    FiniteRankSpec(Variant v, Weight q, double lambda) : variant_(v), q_(std::move(q)), lambda_(lambda) {}

    Variant variant_;
    Weight q_;
    double lambda_;
};

inline MuntzPoly finite_rank_apply(const FiniteRankSpec& spec, const MuntzPoly& f) {
    return scale(unit_integral(f), spec.range_generator());
}

/// T_rho f = (q(x)/x) int_0^{rho x} f  =  q * sum a_n rho^{lambda_n+1} x^{lambda_n} / (lambda_n+1).
inline MuntzPoly t_rho_apply(const Weight& q, double rho, const MuntzPoly& f) {
    if (!(rho > 0.0 && rho < 1.0)) throw std::domain_error("t_rho_apply: rho must lie in (0, 1)");
    std::vector<Term> terms;
    terms.reserve(f.size());
    for (const Term& term : f.terms()) {
        const double e = term.exponent + 1.0;
        terms.push_back({term.exponent, term.coefficient * std::pow(rho, e) / e});
    }
    return multiply(q.poly(), MuntzPoly(std::move(terms)));
}

/// e_lambda(f): the coefficient of x^lambda in f.
inline double erdos_functional(const MuntzPoly& f, double lambda) { return f.coefficient_of(lambda); }

/// T_rho f (x) evaluated as the nuclear series
///   sum_n e_n(f) rho^{lambda_n+1}/(lambda_n+1) x^{lambda_n} q(x)
/// over the given exponent set, one rank-one term at a time.
inline double t_rho_nuclear_eval(const Weight& q, double rho, const MuntzPoly& f,
                                 std::span<const double> lambda_set, double x) {
    const UnitPoint p = UnitPoint::from_x(x);
    const double qx = q.poly().eval(p);
    double sum = 0.0;
    for (double lambda : lambda_set) {
        const double e = erdos_functional(f, lambda);
        if (e == 0.0) continue;
        sum += e * (std::pow(rho, lambda + 1.0) / (lambda + 1.0)) * (unit_power(p, lambda) * qx);
    }
    return sum;
}

}  // namespace muntz
