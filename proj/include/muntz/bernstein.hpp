#pragma once

// Bernstein numbers b_n(T) = sup_{dim E = n} inf_{v in E, |v| = 1} |T v| for
// T = V_Lambda, Gamma_Lambda : M^1_Lambda -> C, estimated on lacunary
// (Newman) subspaces.  On such a subspace the sup-norm of sum a_k x^{lambda_k}
// dominates (1 - eps) max_m |a_1 + ... + a_m|, and the Abel bound
// ||a||_1 <= (2n - 1) max_m |s_m| turns that into b_n >= (1 - eps)/(2n - 1).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "muntz/essential.hpp"
#include "muntz/norms.hpp"
#include "muntz/operators.hpp"
#include "muntz/parallel.hpp"
#include "muntz/poly.hpp"

namespace muntz {

/// 1 - 2 a^2 (1 + ln b) / b for consecutive exponents a < b.
inline double newman_factor(double a, double b) { return 1.0 - 2.0 * a * a * (1.0 + std::log(b)) / b; }

struct NewmanSequence {
    std::vector<double> exponents;
    double eps = 0.0;
    std::vector<double> factors;  // factors[j] = newman_factor(exponents[j], exponents[j+1])

    double product() const {
        double p = 1.0;
        for (double f : factors) p *= f;
        return p;
    }
};

/// Raised when the exponent pool runs out before n terms are selected.
class NewmanPoolExhausted : public std::runtime_error {
public:
    NewmanPoolExhausted(std::size_t reached)
        : std::runtime_error("newman_sequence: pool exhausted after " + std::to_string(reached) + " exponents"),
          reached_(reached) {}
    std::size_t reached() const { return reached_; }

private:
    std::size_t reached_;
};

namespace detail {

// Smallest integer b > a with newman_factor(a, b) >= threshold.  The factor
// is increasing in b for b > 1, so an exponential bracket plus bisection
// gives the same answer as a linear scan.
inline double next_newman_integer(double a, double threshold) {
    auto ok = [&](double b) { return b > 1.0 && newman_factor(a, b) >= threshold; };
    double lo = std::floor(a);  // not admissible: lo <= a
    double hi = lo + 1.0;
    while (!ok(hi)) {
        lo = hi;
        hi = std::floor(hi * 2.0);
        if (!std::isfinite(hi)) throw std::overflow_error("newman_sequence: exponent overflow");
    }
    while (hi - lo > 1.0) {
        const double mid = std::floor(lo + (hi - lo) / 2.0);
        if (mid <= lo || mid >= hi) break;
        if (ok(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

}  // namespace detail

/// Lacunary sequence lambda'_1 < ... < lambda'_n with every factor at least
/// (1 - eps)^{1/(n-1)}, so the product is at least 1 - eps.  Without a pool
/// the next exponent is the smallest admissible integer; with a pool it is
/// the next admissible member, and lambda'_1 is the first member >= seed.
inline NewmanSequence newman_sequence(double seed, double eps, std::size_t n,
                                      std::optional<std::span<const double>> pool = std::nullopt) {
    if (!(seed >= 1.0) || !std::isfinite(seed)) throw std::domain_error("newman_sequence: seed must be >= 1");
    if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("newman_sequence: eps must lie in (0, 1)");
    if (n < 2) throw std::domain_error("newman_sequence: n must be at least 2");

    const double threshold = std::pow(1.0 - eps, 1.0 / double(n - 1));
    NewmanSequence seq;
    seq.eps = eps;

    if (!pool) {
        seq.exponents.push_back(seed);
        while (seq.exponents.size() < n) {
            seq.exponents.push_back(detail::next_newman_integer(seq.exponents.back(), threshold));
        }
    } else {
        const auto& members = *pool;
        std::size_t i = 0;
        while (i < members.size() && members[i] < seed) ++i;
        if (i == members.size()) throw NewmanPoolExhausted(0);
        seq.exponents.push_back(members[i]);
        for (++i; seq.exponents.size() < n; ++i) {
            if (i == members.size()) throw NewmanPoolExhausted(seq.exponents.size());
            if (newman_factor(seq.exponents.back(), members[i]) >= threshold) seq.exponents.push_back(members[i]);
        }
    }
    for (std::size_t j = 0; j + 1 < seq.exponents.size(); ++j) {
        seq.factors.push_back(newman_factor(seq.exponents[j], seq.exponents[j + 1]));
    }
    for (double f : seq.factors) {
        if (!(f > 0.0 && f <= 1.0) || f < threshold) throw std::logic_error("newman_sequence: factor out of range");
    }
    if (seq.product() < 1.0 - eps - 1e-15) throw std::logic_error("newman_sequence: product below 1 - eps");
    return seq;
}

struct NewmanStats {
    std::size_t trials = 0;
    std::size_t violations = 0;  // ratio < 1 - eps
    std::size_t skipped = 0;     // every partial sum vanished
    double min_ratio = std::numeric_limits<double>::infinity();
};

/// ratio = || sum a_k x^{lambda'_k} ||_inf / max_m |s_m| for a given coefficient vector.
inline std::optional<double> newman_ratio(const NewmanSequence& seq, std::span<const double> a) {
    if (a.size() != seq.exponents.size()) throw std::invalid_argument("newman_ratio: size mismatch");
    double partial = 0.0;
    double max_partial = 0.0;
    std::vector<Term> terms;
    for (std::size_t k = 0; k < a.size(); ++k) {
        partial += a[k];
        max_partial = std::max(max_partial, std::abs(partial));
        terms.push_back({seq.exponents[k], a[k]});
    }
    if (max_partial == 0.0) return std::nullopt;
    return sup_norm(MuntzPoly(std::move(terms))).value / max_partial;
}

/// Random coefficient vectors (uniform on [-1, 1]^n) against the Newman inequality.
inline NewmanStats newman_inequality_stats(const NewmanSequence& seq, std::size_t trials, std::uint64_t seed,
                                           unsigned workers = 1) {
    if (trials == 0) throw std::domain_error("newman_inequality_stats: trials must be positive");
    const auto ratios = parallel_map(trials, workers, [&](std::size_t i) {
        auto rng = derived_rng(seed, i);
        std::uniform_real_distribution<double> coef(-1.0, 1.0);
        std::vector<double> a(seq.exponents.size());
        for (double& v : a) v = coef(rng);
        return newman_ratio(seq, a);
    });
    NewmanStats stats;
    stats.trials = trials;
    for (const auto& r : ratios) {
        if (!r) {
            ++stats.skipped;
            continue;
        }
        stats.min_ratio = std::min(stats.min_ratio, *r);
        if (*r < 1.0 - seq.eps) ++stats.violations;
    }
    return stats;
}

struct AbelCheck {
    double lhs = 0.0;  // ||a||_1
    double rhs = 0.0;  // (2n - 1) max_m |s_m|
    bool holds = false;
};

inline AbelCheck abel_bound_check(std::span<const double> a) {
    if (a.empty()) throw std::domain_error("abel_bound_check: empty vector");
    AbelCheck out;
    double partial = 0.0;
    double max_partial = 0.0;
    for (double v : a) {
        out.lhs += std::abs(v);
        partial += v;
        max_partial = std::max(max_partial, std::abs(partial));
    }
    out.rhs = double(2 * a.size() - 1) * max_partial;
    out.holds = out.lhs <= out.rhs + 1e-12;
    return out;
}

// ---------------------------------------------------------------------------
// Inner infimum over a fixed subspace

struct OptimizerBudget {
    std::size_t starts = 32;
    std::size_t evals_per_start = 10000;
    unsigned workers = 1;
};

struct InnerInfResult {
    double value = 0.0;
    std::vector<double> witness;  // a_k, f = sum a_k (lambda_k + 1) x^{lambda_k}, ||f||_1 = 1
    MuntzPoly witness_poly;
    double witness_a_l1 = 0.0;
    double witness_f_l1 = 0.0;
    bool converged = false;
    std::size_t evaluations = 0;
};

namespace detail {

inline std::vector<double> sphere_point(std::span<const double> angles) {
    std::vector<double> a(angles.size() + 1);
    double s = 1.0;
    for (std::size_t i = 0; i < angles.size(); ++i) {
        a[i] = s * std::cos(angles[i]);
        s *= std::sin(angles[i]);
    }
    a.back() = s;
    return a;
}

inline MuntzPoly subspace_member(std::span<const double> exponents, std::span<const double> a) {
    std::vector<Term> terms;
    for (std::size_t k = 0; k < a.size(); ++k) terms.push_back({exponents[k], a[k] * (exponents[k] + 1.0)});
    return MuntzPoly(std::move(terms));
}

struct DescentResult {
    double value = std::numeric_limits<double>::infinity();
    std::vector<double> angles;
    bool converged = false;
    std::size_t evaluations = 0;
};

}  // namespace detail

/// ||op f||_inf / ||f||_1 for f = sum a_k (lambda_k + 1) x^{lambda_k}; infinite for f = 0.
inline double bernstein_ratio(OperatorTag op, std::span<const double> exponents, std::span<const double> a) {
    const MuntzPoly f = detail::subspace_member(exponents, a);
    if (f.is_zero()) return std::numeric_limits<double>::infinity();
    return sup_norm(apply_operator(op, f)).value / l1_norm(f).value;
}

/// Multi-start coordinate descent of the ratio over the unit sphere of
/// coefficient space, parameterized by hyperspherical angles.  The value is
/// the smallest ratio ever probed, so it is an upper estimate of the infimum.
inline InnerInfResult inner_inf(OperatorTag op, std::span<const double> exponents, const OptimizerBudget& budget,
                                std::uint64_t seed) {
    const std::size_t n = exponents.size();
    if (n == 0) throw std::domain_error("inner_inf: empty subspace");
    for (std::size_t k = 1; k < n; ++k) {
        if (!(exponents[k] > exponents[k - 1])) throw std::domain_error("inner_inf: exponents must be distinct");
    }
    if (budget.starts == 0 || budget.evals_per_start == 0) throw std::domain_error("inner_inf: empty budget");

    auto run_start = [&](std::size_t s) {
        detail::DescentResult r;
        auto rng = derived_rng(seed, s);
        std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
        std::vector<double> phi(n - 1);
        for (double& p : phi) p = angle(rng);
        auto objective = [&](std::span<const double> angles) {
            ++r.evaluations;
            const std::vector<double> a = detail::sphere_point(angles);
            return bernstein_ratio(op, exponents, a);
        };
        double current = objective(phi);
        r.value = current;
        r.angles = phi;
        if (phi.empty()) {
            r.converged = true;
            return r;
        }
        std::vector<double> step(phi.size(), 0.25);
        while (r.evaluations < budget.evals_per_start) {
            bool all_small = true;
            for (std::size_t i = 0; i < phi.size() && r.evaluations < budget.evals_per_start; ++i) {
                if (step[i] < 1e-10) continue;
                all_small = false;
                bool moved = false;
                for (double dir : {1.0, -1.0}) {
                    std::vector<double> trial = phi;
                    trial[i] += dir * step[i];
                    const double v = objective(trial);
                    if (v < current) {
                        phi = std::move(trial);
                        current = v;
                        moved = true;
                        break;
                    }
                }
                step[i] = moved ? std::min(step[i] * 2.0, 1.0) : step[i] * 0.5;
                if (current < r.value) {
                    r.value = current;
                    r.angles = phi;
                }
            }
            if (all_small) {
                r.converged = true;
                break;
            }
        }
        return r;
    };

    const std::size_t starts = n == 1 ? 1 : budget.starts;
    const auto runs = parallel_map(starts, budget.workers, run_start);

    std::size_t best = 0;
    InnerInfResult out;
    for (std::size_t s = 0; s < runs.size(); ++s) {
        out.evaluations += runs[s].evaluations;
        if (runs[s].value < runs[best].value) best = s;
    }
    out.value = runs[best].value;
    out.converged = runs[best].converged;

    std::vector<double> a = detail::sphere_point(runs[best].angles);
    const MuntzPoly f = detail::subspace_member(exponents, a);
    const double f_l1 = l1_norm(f).value;
    for (double& v : a) v /= f_l1;
    out.witness = a;
    out.witness_poly = normalize_l1(f);
    out.witness_f_l1 = l1_norm(out.witness_poly).value;
    out.witness_a_l1 = 0.0;
    for (double v : a) out.witness_a_l1 += std::abs(v);
    return out;
}

struct BernsteinReport {
    OperatorTag op = OperatorTag::volterra;
    std::size_t n = 0;
    double eps = 0.0;
    std::vector<double> exponents;
    double value = 0.0;
    std::vector<double> witness;
    MuntzPoly witness_poly;
    double witness_a_l1 = 0.0;
    double witness_f_l1 = 0.0;
    double theory_lower = 0.0;  // (1 - eps)/(2n - 1)
    double theory_value = 0.0;  // 1/(2n - 1)
    bool converged = false;
};

/// Builds E from a Newman sequence over the pool (or over the integers when
/// no pool is given) and estimates the inner infimum on it.
inline BernsteinReport bernstein_estimate(OperatorTag op, std::size_t n, double eps,
                                          const std::optional<ExponentRule>& pool, const OptimizerBudget& budget,
                                          std::uint64_t seed, double seed_exponent = 1.0) {
    if (n == 0) throw std::domain_error("bernstein_estimate: n must be positive");
    std::vector<double> members;
    if (pool) members = pool->materialize();

    BernsteinReport report;
    report.op = op;
    report.n = n;
    report.eps = eps;
    if (n == 1) {
        double first = seed_exponent;
        if (pool) {
            auto it = std::lower_bound(members.begin(), members.end(), seed_exponent);
            if (it == members.end()) throw NewmanPoolExhausted(0);
            first = *it;
        }
        report.exponents = {first};
    } else {
        const auto seq = pool ? newman_sequence(seed_exponent, eps, n, std::span<const double>(members))
                              : newman_sequence(seed_exponent, eps, n);
        report.exponents = seq.exponents;
    }
    const InnerInfResult inf = inner_inf(op, report.exponents, budget, seed);
    report.value = inf.value;
    report.witness = inf.witness;
    report.witness_poly = inf.witness_poly;
    report.witness_a_l1 = inf.witness_a_l1;
    report.witness_f_l1 = inf.witness_f_l1;
    report.converged = inf.converged;
    report.theory_value = 1.0 / double(2 * n - 1);
    report.theory_lower = (1.0 - eps) * report.theory_value;
    return report;
}

}  // namespace muntz
