#pragma once

// Essential-norm experiments.
//
// Lower bounds: a normalized sequence x_n whose images T x_n converge
// pointwise to a function H with a jump of height h at t0 gives
// ||T||_{e,w} >= h/2.  Here H is sampled on a grid refined towards t0 and the
// jump is read off as the oscillation of H over shrinking balls.
//
// Upper bounds: operator norms over the unit ball of M^1_Lambda are only ever
// sampled, so every reported norm is a lower estimate; upper bounds are
// checked as "no sample exceeds the theorem's value".

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "muntz/norms.hpp"
#include "muntz/operators.hpp"
#include "muntz/parallel.hpp"
#include "muntz/poly.hpp"

namespace muntz {

enum class OperatorTag { volterra, cesaro };

inline const char* to_string(OperatorTag tag) { return tag == OperatorTag::volterra ? "volterra" : "cesaro"; }

inline MuntzPoly apply_operator(OperatorTag tag, const MuntzPoly& f) {
    return tag == OperatorTag::volterra ? volterra(f) : cesaro(f);
}

using PolyMap = std::function<MuntzPoly(const MuntzPoly&)>;

// ---------------------------------------------------------------------------
// Witness families and block-subsequences

/// Normalized sequence g_n = (gamma_n + 1) x^{gamma_n}, gamma strictly increasing.
class WitnessFamily {
public:
    explicit WitnessFamily(std::vector<double> gammas) : gammas_(std::move(gammas)) {
        if (gammas_.empty()) throw std::invalid_argument("WitnessFamily: no exponents");
        for (std::size_t i = 0; i < gammas_.size(); ++i) {
            if (i > 0 && !(gammas_[i] > gammas_[i - 1])) {
                throw std::invalid_argument("WitnessFamily: exponents must be strictly increasing");
            }
            members_.push_back(MuntzPoly::monomial(gammas_[i], gammas_[i] + 1.0));
        }
    }

    /// gamma_n = 2^n, n = 0..63.
    static WitnessFamily dyadic() { return WitnessFamily(ExponentRule::geometric(1.0, 2.0, 64).materialize()); }

    std::size_t size() const { return members_.size(); }
    const MuntzPoly& operator[](std::size_t n) const { return members_.at(n); }
    const std::vector<MuntzPoly>& members() const { return members_; }
    const std::vector<double>& gammas() const { return gammas_; }

private:
    std::vector<double> gammas_;
    std::vector<MuntzPoly> members_;
};

/// Disjoint ordered index blocks I_m with convex weights c_j on each block.
struct BlockSpec {
    std::vector<std::vector<std::size_t>> blocks;
    std::vector<std::vector<double>> weights;

    void validate(std::size_t family_size) const {
        if (blocks.size() != weights.size()) throw std::domain_error("BlockSpec: blocks/weights size mismatch");
        std::optional<std::size_t> previous_max;
        for (std::size_t m = 0; m < blocks.size(); ++m) {
            const auto& block = blocks[m];
            const auto& w = weights[m];
            if (block.empty() || block.size() != w.size()) {
                throw std::domain_error("BlockSpec: block " + std::to_string(m) + " is empty or mis-sized");
            }
            for (std::size_t i = 0; i < block.size(); ++i) {
                if (block[i] >= family_size) throw std::domain_error("BlockSpec: index out of range");
                if (i > 0 && block[i] <= block[i - 1]) throw std::domain_error("BlockSpec: unordered block");
                if (!(w[i] >= 0.0 && w[i] <= 1.0)) throw std::domain_error("BlockSpec: weight outside [0, 1]");
            }
            if (previous_max && block.front() <= *previous_max) {
                throw std::domain_error("BlockSpec: blocks overlap or are out of order");
            }
            previous_max = block.back();
            double sum = 0.0;
            for (double c : w) sum += c;
            if (std::abs(sum - 1.0) > 1e-12) {
                throw std::domain_error("BlockSpec: weights of block " + std::to_string(m) + " sum to " +
                                        std::to_string(sum));
            }
        }
    }

    /// Consecutive blocks of `width` indices with equal weights.
    static BlockSpec uniform(std::size_t family_size, std::size_t width) {
        BlockSpec spec;
        for (std::size_t start = 0; start + width <= family_size; start += width) {
            std::vector<std::size_t> block;
            for (std::size_t j = start; j < start + width; ++j) block.push_back(j);
            spec.blocks.push_back(std::move(block));
            spec.weights.emplace_back(width, 1.0 / double(width));
        }
        return spec;
    }
};

/// x~_m = sum_{j in I_m} c_j x_j.
inline std::vector<MuntzPoly> block_subsequence(std::span<const MuntzPoly> family, const BlockSpec& spec) {
    spec.validate(family.size());
    std::vector<MuntzPoly> out;
    out.reserve(spec.blocks.size());
    for (std::size_t m = 0; m < spec.blocks.size(); ++m) {
        MuntzPoly sum;
        for (std::size_t i = 0; i < spec.blocks[m].size(); ++i) {
            sum = linear_combine(1.0, sum, spec.weights[m][i], family[spec.blocks[m][i]]);
        }
        out.push_back(std::move(sum));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Sampled pointwise limits and discontinuity heights

inline constexpr std::size_t kDefaultTail = 5;
inline constexpr double kDefaultSpreadTolerance = 1e-6;

/// Uniform grid i/1024 plus t0 +- 2^{-j}, j = 1..40, clipped to [0, 1].
inline std::vector<double> limit_grid(double t0, int refinements = 40) {
    std::vector<double> grid;
    for (int i = 0; i <= 1024; ++i) grid.push_back(double(i) / 1024.0);
    for (int j = 1; j <= refinements; ++j) {
        const double d = std::ldexp(1.0, -j);
        if (t0 - d >= 0.0) grid.push_back(t0 - d);
        if (t0 + d <= 1.0) grid.push_back(t0 + d);
    }
    grid.push_back(t0);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

/// Ball radii 2^{-j}, j = first..last.
inline std::vector<double> dyadic_radii(int first = 3, int last = 20) {
    std::vector<double> radii;
    for (int j = first; j <= last; ++j) radii.push_back(std::ldexp(1.0, -j));
    return radii;
}

struct LimitSample {
    double t = 0.0;
    double value = 0.0;
    double spread = 0.0;  // max - min over the tail
};

struct SampledLimit {
    std::vector<LimitSample> samples;
    double tolerance = kDefaultSpreadTolerance;

    bool converged_at(std::size_t i) const { return samples[i].spread <= tolerance; }
    bool converged() const {
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (!converged_at(i)) return false;
        }
        return true;
    }
};

/// Tail estimate of lim_n values(n, t): mean and spread of the last n_tail values.
inline SampledLimit tail_limit(std::size_t sequence_length, std::span<const double> grid, std::size_t n_tail,
                               const std::function<double(std::size_t, double)>& values,
                               double tolerance = kDefaultSpreadTolerance) {
    if (grid.empty()) throw std::domain_error("pointwise_limit: empty grid");
    if (n_tail < 2) throw std::domain_error("pointwise_limit: n_tail must be at least 2");
    if (n_tail > sequence_length) throw std::domain_error("pointwise_limit: sequence shorter than the tail");
    SampledLimit limit;
    limit.tolerance = tolerance;
    limit.samples.reserve(grid.size());
    for (double t : grid) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        double sum = 0.0;
        for (std::size_t n = sequence_length - n_tail; n < sequence_length; ++n) {
            const double v = values(n, t);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            sum += v;
        }
        limit.samples.push_back({t, sum / double(n_tail), hi - lo});
    }
    return limit;
}

/// Pointwise limit of op(x_n) sampled on the grid.
inline SampledLimit pointwise_limit(const PolyMap& op, std::span<const MuntzPoly> family,
                                    std::span<const double> grid, std::size_t n_tail = kDefaultTail,
                                    double tolerance = kDefaultSpreadTolerance) {
    std::vector<MuntzPoly> images;
    images.reserve(family.size());
    const std::size_t first = family.size() >= n_tail ? family.size() - n_tail : 0;
    for (std::size_t n = 0; n < family.size(); ++n) images.push_back(n >= first ? op(family[n]) : MuntzPoly{});
    return tail_limit(family.size(), grid, n_tail,
                      [&](std::size_t n, double t) { return images[n].eval(t); }, tolerance);
}

inline SampledLimit pointwise_limit(OperatorTag tag, std::span<const MuntzPoly> family,
                                    std::span<const double> grid, std::size_t n_tail = kDefaultTail,
                                    double tolerance = kDefaultSpreadTolerance) {
    return pointwise_limit([tag](const MuntzPoly& f) { return apply_operator(tag, f); }, family, grid, n_tail,
                           tolerance);
}

struct DiscontinuityEstimate {
    double t0 = 0.0;
    double height = 0.0;
    std::vector<double> radii;
    std::vector<double> diameters;  // oscillation of H over B(t0, radius), per radius
    std::vector<LimitSample> limit_samples;
};

/// Oscillation of the sampled limit over the open balls B(t0, delta).
/// Samples whose tail spread exceeds the limit's tolerance are ignored.  The
/// balls are nested, so the oscillation is non-increasing along the schedule
/// and the height is its value at the smallest radius.
inline DiscontinuityEstimate discontinuity_height(const SampledLimit& H, double t0, std::span<const double> radii) {
    if (radii.empty()) throw std::domain_error("discontinuity_height: empty radii schedule");
    for (std::size_t j = 0; j < radii.size(); ++j) {
        if (!(radii[j] > 0.0) || (j > 0 && !(radii[j] < radii[j - 1]))) {
            throw std::domain_error("discontinuity_height: radii must be positive and strictly decreasing");
        }
    }
    if (H.samples.empty()) throw std::domain_error("discontinuity_height: no samples");
    auto [lo_it, hi_it] = std::minmax_element(H.samples.begin(), H.samples.end(),
                                              [](const LimitSample& a, const LimitSample& b) { return a.t < b.t; });
    if (t0 < lo_it->t || t0 > hi_it->t) throw std::domain_error("discontinuity_height: t0 outside the grid hull");

    DiscontinuityEstimate est;
    est.t0 = t0;
    est.radii.assign(radii.begin(), radii.end());
    est.limit_samples = H.samples;
    for (double delta : radii) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        std::size_t inside = 0;
        for (std::size_t i = 0; i < H.samples.size(); ++i) {
            const LimitSample& s = H.samples[i];
            if (std::abs(s.t - t0) < delta && H.converged_at(i)) {
                lo = std::min(lo, s.value);
                hi = std::max(hi, s.value);
                ++inside;
            }
        }
        if (inside == 0) {
            throw std::domain_error("discontinuity_height: no converged grid point within radius " +
                                    std::to_string(delta));
        }
        est.diameters.push_back(hi - lo);
    }
    est.height = est.diameters.back();
    return est;
}

struct EssentialLowerBound {
    double value = 0.0;  // height / 2
    DiscontinuityEstimate estimate;
    bool converged = false;  // every tail spread within tolerance
};

/// h/2 for the limit of op(g_n) near t0, default grid, radii and tail.
inline EssentialLowerBound essential_lower_bound(OperatorTag tag, const WitnessFamily& family, double t0 = 1.0) {
    const std::vector<double> grid = limit_grid(t0);
    const SampledLimit H = pointwise_limit(tag, family.members(), grid);
    const std::vector<double> radii = dyadic_radii();
    EssentialLowerBound out;
    out.estimate = discontinuity_height(H, t0, radii);
    out.value = out.estimate.height / 2.0;
    out.converged = H.converged();
    return out;
}

// ---------------------------------------------------------------------------
// Unit-ball sampling and sampled operator norms

/// Source of unit-L1 Muntz polynomials.  Index i < deterministic().size()
/// yields the i-th fixed member; other indices draw 1..max_terms exponents of
/// the pool with coefficients uniform on [-1, 1] and normalize.  Every sample
/// depends only on (seed, index).
class UnitBallSampler {
public:
    UnitBallSampler(std::vector<double> exponents, std::uint64_t seed, std::vector<MuntzPoly> deterministic = {},
                    std::size_t max_terms = 6)
        : exponents_(std::move(exponents)),
          seed_(seed),
          deterministic_(std::move(deterministic)),
          max_terms_(max_terms) {
        if (exponents_.empty()) throw std::invalid_argument("UnitBallSampler: empty exponent pool");
        if (max_terms_ == 0) throw std::invalid_argument("UnitBallSampler: max_terms must be positive");
        for (MuntzPoly& f : deterministic_) f = normalize_l1(f);
    }

    /// Pool exponents plus the witness family g_n on the same exponents.
    static UnitBallSampler with_witnesses(std::vector<double> exponents, std::uint64_t seed) {
        WitnessFamily family(exponents);
        return UnitBallSampler(std::move(exponents), seed, family.members());
    }

    MuntzPoly sample(std::size_t index) const {
        if (index < deterministic_.size()) return deterministic_[index];
        auto rng = derived_rng(seed_, index);
        const std::size_t pool = exponents_.size();
        std::uniform_int_distribution<std::size_t> count_dist(1, std::min(max_terms_, pool));
        std::uniform_real_distribution<double> coef(-1.0, 1.0);
        for (;;) {
            const std::size_t k = count_dist(rng);
            std::vector<std::size_t> idx(pool);
            for (std::size_t i = 0; i < pool; ++i) idx[i] = i;
            std::vector<Term> terms;
            for (std::size_t i = 0; i < k; ++i) {
                std::uniform_int_distribution<std::size_t> pick(i, pool - 1);
                std::swap(idx[i], idx[pick(rng)]);
                terms.push_back({exponents_[idx[i]], coef(rng)});
            }
            MuntzPoly f(std::move(terms));
            if (!f.is_zero()) return normalize_l1(f);
        }
    }

    const std::vector<double>& exponents() const { return exponents_; }
    std::size_t deterministic_count() const { return deterministic_.size(); }
    std::uint64_t seed() const { return seed_; }

private:
    std::vector<double> exponents_;
    std::uint64_t seed_;
    std::vector<MuntzPoly> deterministic_;
    std::size_t max_terms_;
};

struct OperatorGap {
    double max_gap = 0.0;
    std::size_t arg_index = 0;
    MuntzPoly arg;
};

/// max over samples of ||A f||_inf; a lower estimate of ||A||.
inline OperatorGap sampled_operator_gap(const PolyMap& A, const UnitBallSampler& sampler, std::size_t count,
                                        unsigned workers = 1) {
    if (count == 0) throw std::domain_error("sampled_operator_gap: count must be positive");
    const auto gaps =
        parallel_map(count, workers, [&](std::size_t i) { return sup_norm(A(sampler.sample(i))).value; });
    OperatorGap out;
    out.max_gap = gaps[0];
    for (std::size_t i = 1; i < gaps.size(); ++i) {
        if (gaps[i] > out.max_gap) {
            out.max_gap = gaps[i];
            out.arg_index = i;
        }
    }
    out.arg = sampler.sample(out.arg_index);
    return out;
}

/// (V - S) f = int_0^x f - (1/2) int_0^1 f.
inline MuntzPoly volterra_minus_s(const MuntzPoly& f) {
    return volterra(f) - finite_rank_apply(FiniteRankSpec::s(), f);
}

/// (Gamma - S) f.
inline MuntzPoly cesaro_minus_s(const MuntzPoly& f) { return cesaro(f) - finite_rank_apply(FiniteRankSpec::s(), f); }

/// max over samples of sup_{[0,c]} |f| / ||f||_1, clamped below at 1.
inline double estimate_N_epsilon(const UnitBallSampler& sampler, double c, std::size_t count, unsigned workers = 1) {
    if (!(c > 0.0 && c < 1.0)) throw std::domain_error("estimate_N_epsilon: c must lie in (0, 1)");
    if (count == 0) throw std::domain_error("estimate_N_epsilon: count must be positive");
    const auto ratios = parallel_map(count, workers, [&](std::size_t i) {
        const MuntzPoly f = sampler.sample(i);
        return sup_norm_on(f, 0.0, c).value / l1_norm(f).value;
    });
    double best = 1.0;
    for (double r : ratios) best = std::max(best, r);
    return best;
}

/// Smallest grid point c in (0, 1) with 2 - c^{lambda+1} <= (1 + eps) c.
inline double choose_c_for_r(double lambda, double eps, std::span<const double> grid) {
    for (double c : grid) {
        if (c > 0.0 && c < 1.0 && 2.0 - std::pow(c, lambda + 1.0) <= (1.0 + eps) * c) return c;
    }
    throw std::domain_error("choose_c_for_r: no admissible c on the grid");
}

/// Smallest grid point c in (0, 1) such that |2 q(x)/x - q(1)| <= |q(1)| + eps
/// at every grid point x in [c, 1].
inline double choose_c_for_r1(const Weight& q, double eps, std::span<const double> grid) {
    const double q1 = q.at_one();
    std::vector<double> points;
    for (double x : grid) {
        if (x > 0.0 && x <= 1.0) points.push_back(x);
    }
    std::sort(points.begin(), points.end());
    // Scan from the right: the admissible set is the longest good suffix.
    std::optional<double> c;
    for (auto it = points.rbegin(); it != points.rend(); ++it) {
        const double x = *it;
        if (std::abs(2.0 * q.poly().eval(x) / x - q1) > std::abs(q1) + eps) break;
        if (x < 1.0) c = x;
    }
    if (!c) throw std::domain_error("choose_c_for_r1: no admissible c on the grid");
    return *c;
}

inline double choose_rho(double eps, double n_epsilon) { return 1.0 - eps / n_epsilon; }

/// ||H_q f - A f - T_rho f||_inf for a unit-norm f, A = R or R1.
inline double hq_approx_gap(const Weight& q, double rho, const FiniteRankSpec& approximant, const MuntzPoly& f) {
    if (approximant.variant() == FiniteRankSpec::Variant::S) {
        throw std::domain_error("hq_approx_gap: approximant must be R or R1");
    }
    const double norm = l1_norm(f).value;
    if (std::abs(norm - 1.0) > 1e-9) {
        throw std::domain_error("hq_approx_gap: f is not L1-normalized (norm " + std::to_string(norm) + ")");
    }
    const MuntzPoly residual = weighted_hq(q, f) - finite_rank_apply(approximant, f) - t_rho_apply(q, rho, f);
    return sup_norm(residual).value;
}

struct HqBoundResult {
    double c = 0.0;
    double n_epsilon = 0.0;
    double rho = 0.0;
    double max_gap = 0.0;
    std::size_t arg_index = 0;
    MuntzPoly arg;
    double bound = 0.0;  // theorem value the gap may not exceed
};

/// Distance of H_q to R + T_rho (q = 1 style, `use_r1` false) or R1 + T_rho,
/// with c, N_eps and rho = 1 - eps/N_eps chosen as in the upper-bound argument.
/// `c_override` / `rho_override` replace the derived values when set.
inline HqBoundResult hq_bound_experiment(const Weight& q, bool use_r1, double eps, const UnitBallSampler& sampler,
                                         std::size_t count, unsigned workers = 1,
                                         std::optional<double> c_override = std::nullopt,
                                         std::optional<double> rho_override = std::nullopt) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("hq_bound_experiment: eps must lie in (0, 1)");
    std::vector<double> grid;
    for (int i = 0; i <= 1024; ++i) grid.push_back(double(i) / 1024.0);

    const double lambda = sampler.exponents().front();
    HqBoundResult out;
    out.c = c_override ? *c_override
                       : (use_r1 ? choose_c_for_r1(q, eps, grid) : choose_c_for_r(lambda, eps, grid));
    out.n_epsilon = estimate_N_epsilon(sampler, out.c, count, workers);
    out.rho = rho_override ? *rho_override : choose_rho(eps, out.n_epsilon);
    const FiniteRankSpec approximant =
        use_r1 ? FiniteRankSpec::r1(q) : FiniteRankSpec::r(q, lambda, sampler.exponents());
    out.bound = use_r1 ? std::abs(q.at_one()) * (1.0 + eps) / 2.0 + eps : q.sup() * (1.0 + eps) / 2.0;

    const auto gaps = parallel_map(count, workers, [&](std::size_t i) {
        return hq_approx_gap(q, out.rho, approximant, sampler.sample(i));
    });
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        if (i == 0 || gaps[i] > out.max_gap) {
            out.max_gap = gaps[i];
            out.arg_index = i;
        }
    }
    out.arg = sampler.sample(out.arg_index);
    return out;
}

// ---------------------------------------------------------------------------
// Composition operator f -> f o theta on C([0, 1])

struct CompositionDemoResult {
    double lower_bound = 0.0;
    DiscontinuityEstimate estimate;
};

inline constexpr double kCompositionSpreadTolerance = 1e-4;

/// Witnesses x_n(s) = (n|s - alpha| - 1)/(n|s - alpha| + 1), n = n_max-4..n_max,
/// composed with theta.  Their limit is -1 on theta^{-1}(alpha) and 1 elsewhere;
/// convergence is of order 1/(n d), so the radii stop at about 256/n_max.
inline CompositionDemoResult composition_demo(const std::function<double(double)>& theta, double alpha,
                                              std::size_t n_max) {
    if (n_max < 2 * kDefaultTail) throw std::domain_error("composition_demo: n_max too small");
    std::vector<double> base;
    for (int i = 0; i <= 1024; ++i) base.push_back(double(i) / 1024.0);
    std::vector<bool> in_preimage;
    bool any = false;
    for (double t : base) {
        const bool hit = std::abs(theta(t) - alpha) <= 1e-12;
        in_preimage.push_back(hit);
        any = any || hit;
    }
    if (!any) throw std::domain_error("composition_demo: alpha is not attained by theta on the grid");

    std::optional<std::size_t> boundary;
    for (std::size_t i = 0; i < base.size() && !boundary; ++i) {
        if (!in_preimage[i]) continue;
        const bool left_out = i > 0 && !in_preimage[i - 1];
        const bool right_out = i + 1 < base.size() && !in_preimage[i + 1];
        if (left_out || right_out) boundary = i;
    }
    const double t0 = boundary ? base[*boundary] : base.front();

    int last = int(std::floor(std::log2(double(n_max) / 256.0)));
    last = std::clamp(last, 3, 20);
    const std::vector<double> radii = dyadic_radii(3, last);

    const std::vector<double> grid = limit_grid(t0);
    const std::size_t first_n = n_max - kDefaultTail + 1;
    const SampledLimit H = tail_limit(
        kDefaultTail, grid, kDefaultTail,
        [&](std::size_t k, double t) {
            const double n = double(first_n + k);
            const double d = std::abs(theta(t) - alpha);
            return (n * d - 1.0) / (n * d + 1.0);
        },
        kCompositionSpreadTolerance);

    CompositionDemoResult out;
    out.estimate = discontinuity_height(H, t0, radii);
    out.lower_bound = out.estimate.height / 2.0;
    return out;
}

}  // namespace muntz
