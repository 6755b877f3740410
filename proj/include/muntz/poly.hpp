#pragma once

// Finite Muntz polynomials  f(x) = sum_k a_k x^{lambda_k}  on [0, 1] and their
// closed-form calculus.  Exponents are arbitrary non-negative reals.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace muntz {

/// Exponents closer than this are merged into a single term.
inline constexpr double kExponentMergeTolerance = 1e-12;

/// A point of [0, 1] carried in two coordinates: x itself and its complement
/// t = 1 - x.  Points near 1 are built from t so that x^lambda for very large
/// lambda is evaluated as exp(lambda * log1p(-t)) without losing the
/// resolution that 1 - t would throw away.
struct UnitPoint {
    double x = 0.0;
    double t = 1.0;

    static UnitPoint from_x(double x) { return {x, 1.0 - x}; }
    static UnitPoint from_complement(double t) { return {1.0 - t, t}; }

    /// True when t is the accurate coordinate.
    bool near_one() const { return x > 0.5; }

    friend bool operator==(const UnitPoint& a, const UnitPoint& b) {
        return a.x == b.x && a.t == b.t;
    }
};

/// x^e for any real e, with 0^0 = 1.  Negative e is only meaningful for x > 0.
inline double unit_power(const UnitPoint& p, double e) {
    if (e == 0.0) return 1.0;
    if (!p.near_one()) return std::pow(p.x, e);
    return std::exp(e * std::log1p(-p.t));
}

struct Term {
    double exponent = 0.0;
    double coefficient = 0.0;

    friend bool operator==(const Term&, const Term&) = default;
};

namespace detail {

// Sorts by exponent, merges exponents within the tolerance and drops exact zeros.
inline std::vector<Term> canonicalize(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.exponent < b.exponent; });
    std::vector<Term> out;
    out.reserve(terms.size());
    for (const Term& term : terms) {
        if (!out.empty() && term.exponent - out.back().exponent < kExponentMergeTolerance) {
            out.back().coefficient += term.coefficient;
        } else {
            out.push_back(term);
        }
    }
    std::erase_if(out, [](const Term& term) { return term.coefficient == 0.0; });
    return out;
}

}  // namespace detail

/// Exact finite expansion sum_k a_k x^{lambda_k}.  The term list is kept with
/// strictly increasing exponents and no zero coefficients; an empty list is
/// the zero function.
class MuntzPoly {
public:
    MuntzPoly() = default;

    explicit MuntzPoly(std::vector<Term> terms) {
        for (const Term& term : terms) {
            if (!std::isfinite(term.exponent) || term.exponent < 0.0) {
                throw std::domain_error("MuntzPoly: exponents must be finite and non-negative");
            }
            if (!std::isfinite(term.coefficient)) {
                throw std::domain_error("MuntzPoly: coefficients must be finite");
            }
        }
        terms_ = detail::canonicalize(std::move(terms));
    }

    MuntzPoly(std::initializer_list<Term> terms) : MuntzPoly(std::vector<Term>(terms)) {}

    static MuntzPoly monomial(double exponent, double coefficient = 1.0) {
        return MuntzPoly({Term{exponent, coefficient}});
    }
    static MuntzPoly constant(double value) { return monomial(0.0, value); }

    const std::vector<Term>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    double least_exponent() const {
        if (terms_.empty()) throw std::domain_error("least_exponent of the zero polynomial");
        return terms_.front().exponent;
    }

    std::vector<double> exponents() const {
        std::vector<double> out;
        out.reserve(terms_.size());
        for (const Term& term : terms_) out.push_back(term.exponent);
        return out;
    }

    /// f(x) for x in [0, 1]; 0^0 = 1.
    double eval(double x) const {
        if (!(x >= 0.0 && x <= 1.0)) {
            throw std::domain_error("MuntzPoly::eval: x = " + std::to_string(x) + " outside [0, 1]");
        }
        return eval(UnitPoint::from_x(x));
    }

    double eval(const UnitPoint& p) const {
        double sum = 0.0;
        for (const Term& term : terms_) sum += term.coefficient * unit_power(p, term.exponent);
        return sum;
    }

    /// The analytic-extension value f(0): the constant term, or 0.
    double value_at_zero() const {
        if (terms_.empty() || terms_.front().exponent != 0.0) return 0.0;
        return terms_.front().coefficient;
    }

    /// sum_k a_k / (lambda_k + 1), i.e. the integral over [0, 1].
    double integral() const {
        double sum = 0.0;
        for (const Term& term : terms_) sum += term.coefficient / (term.exponent + 1.0);
        return sum;
    }

    /// Sum of |a_k|; a crude bound on sup |f| used for roundoff estimates.
    double coefficient_l1() const {
        double sum = 0.0;
        for (const Term& term : terms_) sum += std::abs(term.coefficient);
        return sum;
    }

    /// Coefficient of x^lambda, 0 when absent.
    double coefficient_of(double exponent) const {
        for (const Term& term : terms_) {
            if (std::abs(term.exponent - exponent) < kExponentMergeTolerance) return term.coefficient;
        }
        return 0.0;
    }

    friend bool operator==(const MuntzPoly&, const MuntzPoly&) = default;

private:
    std::vector<Term> terms_;
};

/// The primitive vanishing at 0: sum_k a_k x^{lambda_k + 1} / (lambda_k + 1).
inline MuntzPoly antiderivative(const MuntzPoly& f) {
    std::vector<Term> terms;
    terms.reserve(f.size());
    for (const Term& term : f.terms()) {
        terms.push_back({term.exponent + 1.0, term.coefficient / (term.exponent + 1.0)});
    }
    return MuntzPoly(std::move(terms));
}

/// alpha * f + beta * g, merged by exponent.
inline MuntzPoly linear_combine(double alpha, const MuntzPoly& f, double beta, const MuntzPoly& g) {
    std::vector<Term> terms;
    terms.reserve(f.size() + g.size());
    if (alpha != 0.0) {
        for (const Term& term : f.terms()) terms.push_back({term.exponent, alpha * term.coefficient});
    }
    if (beta != 0.0) {
        for (const Term& term : g.terms()) terms.push_back({term.exponent, beta * term.coefficient});
    }
    return MuntzPoly(std::move(terms));
}

inline MuntzPoly multiply(const MuntzPoly& f, const MuntzPoly& g) {
    std::vector<Term> terms;
    terms.reserve(f.size() * g.size());
    for (const Term& a : f.terms()) {
        for (const Term& b : g.terms()) {
            terms.push_back({a.exponent + b.exponent, a.coefficient * b.coefficient});
        }
    }
    return MuntzPoly(std::move(terms));
}

inline MuntzPoly scale(double alpha, const MuntzPoly& f) { return linear_combine(alpha, f, 0.0, {}); }

inline MuntzPoly operator+(const MuntzPoly& f, const MuntzPoly& g) { return linear_combine(1.0, f, 1.0, g); }
inline MuntzPoly operator-(const MuntzPoly& f, const MuntzPoly& g) { return linear_combine(1.0, f, -1.0, g); }
inline MuntzPoly operator*(const MuntzPoly& f, const MuntzPoly& g) { return multiply(f, g); }
inline MuntzPoly operator*(double alpha, const MuntzPoly& f) { return scale(alpha, f); }

/// Generator of a finite prefix of an exponent sequence Lambda.
class ExponentRule {
public:
    enum class Kind { explicit_list, geometric, power };

    /// Finite list, must be strictly increasing and non-negative.
    static ExponentRule explicit_list(std::vector<double> values) {
        if (values.empty()) throw std::invalid_argument("explicit exponent list is empty");
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!std::isfinite(values[i]) || values[i] < 0.0) {
                throw std::invalid_argument("explicit exponents must be finite and non-negative");
            }
            if (i > 0 && !(values[i] > values[i - 1])) {
                throw std::invalid_argument("explicit exponents must be strictly increasing");
            }
        }
        ExponentRule rule;
        rule.kind_ = Kind::explicit_list;
        rule.length_ = values.size();
        rule.values_ = std::move(values);
        return rule;
    }

    /// lambda_k = base * ratio^k, k = 0..length-1.
    static ExponentRule geometric(double base, double ratio, std::size_t length) {
        if (!(base > 0.0) || !std::isfinite(base)) throw std::invalid_argument("geometric rule needs base > 0");
        if (!(ratio > 1.0) || !std::isfinite(ratio)) throw std::invalid_argument("geometric rule needs ratio > 1");
        if (length == 0) throw std::invalid_argument("exponent rule length must be positive");
        ExponentRule rule;
        rule.kind_ = Kind::geometric;
        rule.a_ = base;
        rule.b_ = ratio;
        rule.length_ = length;
        return rule;
    }

    /// lambda_k = (k + 1)^p, k = 0..length-1.
    static ExponentRule power(double p, std::size_t length) {
        if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("power rule needs p > 1");
        if (length == 0) throw std::invalid_argument("exponent rule length must be positive");
        ExponentRule rule;
        rule.kind_ = Kind::power;
        rule.a_ = p;
        rule.length_ = length;
        return rule;
    }

    Kind kind() const { return kind_; }
    std::size_t length() const { return length_; }
    double base() const { return a_; }
    double ratio() const { return b_; }
    double power_exponent() const { return a_; }
    const std::vector<double>& explicit_values() const { return values_; }

    /// Sum of reciprocals of positive exponents is finite for the whole sequence.
    /// Always true for finite lists; r > 1 and p > 1 are enforced on construction.
    bool satisfies_muntz_condition() const { return true; }

    std::vector<double> materialize() const {
        std::vector<double> out;
        out.reserve(length_);
        switch (kind_) {
            case Kind::explicit_list:
                out = values_;
                break;
            case Kind::geometric: {
                double value = a_;
                for (std::size_t k = 0; k < length_; ++k, value *= b_) out.push_back(value);
                break;
            }
            case Kind::power:
                for (std::size_t k = 0; k < length_; ++k) out.push_back(std::pow(double(k + 1), a_));
                break;
        }
        for (std::size_t i = 1; i < out.size(); ++i) {
            if (!(out[i] > out[i - 1]) || !std::isfinite(out[i])) {
                throw std::overflow_error("exponent rule does not materialize to a finite increasing list");
            }
        }
        return out;
    }

    friend bool operator==(const ExponentRule&, const ExponentRule&) = default;

private:
    Kind kind_ = Kind::explicit_list;
    double a_ = 0.0;
    double b_ = 0.0;
    std::size_t length_ = 0;
    std::vector<double> values_;
};

inline const char* to_string(ExponentRule::Kind kind) {
    switch (kind) {
        case ExponentRule::Kind::explicit_list: return "explicit";
        case ExponentRule::Kind::geometric: return "geometric";
        case ExponentRule::Kind::power: return "power";
    }
    return "?";
}

}  // namespace muntz
