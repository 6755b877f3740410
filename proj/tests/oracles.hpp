#pragma once

// Independent reference computations for the tests.  Nothing here goes
// through the library's root isolation or closed-form norms: values come from
// plain std::pow sums, quadrature and brute-force grids.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

struct Mono {
    double e;
    double a;
};
using Expansion = std::vector<Mono>;

inline double eval(const Expansion& f, double x) {
    double s = 0.0;
    for (const Mono& m : f) s += m.a * (m.e == 0.0 ? 1.0 : std::pow(x, m.e));
    return s;
}

inline double deriv(const Expansion& f, double x) {
    double s = 0.0;
    for (const Mono& m : f) {
        if (m.e != 0.0) s += m.a * m.e * std::pow(x, m.e - 1.0);
    }
    return s;
}

// Adaptive Simpson with Richardson correction; returns {value, error estimate}.
inline std::pair<double, double> integrate(const std::function<double(double)>& g, double a, double b,
                                           double tol = 1e-13, int max_depth = 60) {
    struct Rec {
        static std::pair<double, double> step(const std::function<double(double)>& g, double a, double b, double fa,
                                              double fm, double fb, double whole, double tol, int depth) {
            const double m = 0.5 * (a + b);
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const double flm = g(lm), frm = g(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            const double delta = left + right - whole;
            if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
                return {left + right + delta / 15.0, std::abs(delta) / 15.0};
            }
            auto l = step(g, a, m, fa, flm, fm, left, tol / 2.0, depth - 1);
            auto r = step(g, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
            return {l.first + r.first, l.second + r.second};
        }
    };
    const double fa = g(a), fb = g(b), fm = g(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return Rec::step(g, a, b, fa, fm, fb, whole, tol, max_depth);
}

// Integral over [a, b] split at the given points (kinks of |f|, singular
// derivatives), so the adaptive rule only sees smooth pieces.
inline std::pair<double, double> integrate_split(const std::function<double(double)>& g, double a, double b,
                                                 std::vector<double> cuts, double tol = 1e-13) {
    cuts.push_back(a);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    double v = 0.0, err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i] < a || cuts[i + 1] > b || cuts[i + 1] <= cuts[i]) continue;
        auto [pv, pe] = integrate(g, cuts[i], cuts[i + 1], tol);
        v += pv;
        err += pe;
    }
    return {v, err};
}

struct GridMax {
    double value = 0.0;
    double at = 0.0;
    std::size_t index = 0;
};

inline GridMax grid_abs_max(const Expansion& f, std::size_t points) {
    GridMax g;
    for (std::size_t i = 0; i <= points; ++i) {
        const double x = double(i) / double(points);
        const double v = std::abs(eval(f, x));
        if (v > g.value) g = {v, x, i};
    }
    return g;
}

// Sign changes of f on a uniform grid, refined by bisection.
inline std::vector<double> grid_roots(const Expansion& f, std::size_t points) {
    std::vector<double> roots;
    double prev_x = 0.0, prev = eval(f, 0.0);
    for (std::size_t i = 1; i <= points; ++i) {
        const double x = double(i) / double(points);
        const double v = eval(f, x);
        if ((prev < 0.0 && v > 0.0) || (prev > 0.0 && v < 0.0)) {
            double lo = prev_x, hi = x;
            const bool lo_neg = prev < 0.0;
            for (int k = 0; k < 200 && hi - lo > 1e-15; ++k) {
                const double m = 0.5 * (lo + hi);
                if ((eval(f, m) < 0.0) == lo_neg) lo = m;
                else hi = m;
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prev_x = x;
        prev = v;
    }
    return roots;
}

// L1 norm by quadrature of |f|, split at grid-located sign changes.
inline std::pair<double, double> l1(const Expansion& f) {
    return integrate_split([&](double x) { return std::abs(eval(f, x)); }, 0.0, 1.0, grid_roots(f, 20000));
}

// Roots in (0, 1) of c0 + c1 x + c2 x^2.
inline std::vector<double> quadratic_roots(double c0, double c1, double c2) {
    std::vector<double> out;
    const double disc = c1 * c1 - 4.0 * c2 * c0;
    if (disc < 0.0) return out;
    const double s = std::sqrt(disc);
    for (double r : {(-c1 - s) / (2.0 * c2), (-c1 + s) / (2.0 * c2)}) {
        if (r > 0.0 && r < 1.0) out.push_back(r);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Seeded generator of random expansions for property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    std::size_t index(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }

    // Distinct exponents in [0, max_exponent], sorted, coefficients in [-1, 1].
    Expansion expansion(std::size_t terms, double max_exponent, bool allow_zero_exponent = true) {
        Expansion f;
        while (f.size() < terms) {
            double e = uniform(0.0, max_exponent);
            if (allow_zero_exponent && index(0, 5) == 0) e = 0.0;
            bool clash = false;
            for (const Mono& m : f) clash = clash || std::abs(m.e - e) < 1e-3;
            if (clash) continue;
            double a = uniform(-1.0, 1.0);
            if (a == 0.0) a = 0.5;
            f.push_back({e, a});
        }
        std::sort(f.begin(), f.end(), [](const Mono& p, const Mono& q) { return p.e < q.e; });
        return f;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

}  // namespace oracle
