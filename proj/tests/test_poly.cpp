#include <gtest/gtest.h>

#include <cmath>

#include "muntz/poly.hpp"
#include "support.hpp"

using namespace muntz;

TEST(MuntzPoly, CanonicalForm) {
    const MuntzPoly f{{2.0, 1.0}, {0.5, -3.0}, {2.0, 0.5}, {1.0, 0.0}};
    ASSERT_EQ(f.size(), 2u);
    EXPECT_EQ(f.terms()[0], (Term{0.5, -3.0}));
    EXPECT_EQ(f.terms()[1], (Term{2.0, 1.5}));
    EXPECT_TRUE(MuntzPoly{}.is_zero());
    EXPECT_TRUE((MuntzPoly{{3.0, 1.0}, {3.0, -1.0}}).is_zero());
}

TEST(MuntzPoly, NearlyEqualExponentsMerge) {
    const MuntzPoly f{{1.0, 1.0}, {1.0 + 1e-13, 2.0}, {1.0 + 1e-9, 4.0}};
    ASSERT_EQ(f.size(), 2u);
    EXPECT_DOUBLE_EQ(f.terms()[0].coefficient, 3.0);
}

TEST(MuntzPoly, RejectsBadTerms) {
    EXPECT_THROW(MuntzPoly::monomial(-1.0), std::domain_error);
    EXPECT_THROW(MuntzPoly::monomial(NAN), std::domain_error);
    EXPECT_THROW(MuntzPoly::monomial(1.0, INFINITY), std::domain_error);
    EXPECT_THROW((void)MuntzPoly{}.least_exponent(), std::domain_error);
}

TEST(Eval, Examples) {
    EXPECT_DOUBLE_EQ(MuntzPoly::monomial(1.0, 2.0).eval(0.5), 1.0);
    EXPECT_DOUBLE_EQ((MuntzPoly{{0.0, 3.0}, {2.0, 1.0}}).eval(0.0), 3.0);
    EXPECT_DOUBLE_EQ((MuntzPoly{{1.0, 1.0}, {2.0, -2.0}}).eval(0.5), 0.5 - 2.0 * 0.25);
    EXPECT_DOUBLE_EQ(MuntzPoly{}.eval(0.3), 0.0);
}

TEST(Eval, OutsideUnitIntervalIsDomainError) {
    const MuntzPoly f = MuntzPoly::monomial(1.0);
    EXPECT_THROW((void)f.eval(-0.1), std::domain_error);
    EXPECT_THROW((void)f.eval(1.5), std::domain_error);
    EXPECT_THROW((void)f.eval(NAN), std::domain_error);
}

TEST(Eval, HugeExponentsNearOne) {
    // x = 1 - t with t tiny: x^lambda = exp(lambda log1p(-t)).
    const MuntzPoly f = MuntzPoly::monomial(1e12);
    const UnitPoint p = UnitPoint::from_complement(1e-12);
    EXPECT_NEAR(f.eval(p), std::exp(-1.0), 1e-9);
    EXPECT_DOUBLE_EQ(f.eval(1.0), 1.0);
}

TEST(ValueAtZero, Examples) {
    EXPECT_DOUBLE_EQ((MuntzPoly{{0.0, 3.0}, {7.0, 5.0}}).value_at_zero(), 3.0);
    EXPECT_DOUBLE_EQ(MuntzPoly::monomial(0.5).value_at_zero(), 0.0);
    EXPECT_DOUBLE_EQ(MuntzPoly{}.value_at_zero(), 0.0);
}

TEST(Antiderivative, Examples) {
    EXPECT_EQ(antiderivative(MuntzPoly::monomial(1.0, 2.0)), MuntzPoly::monomial(2.0));
    EXPECT_EQ(antiderivative(MuntzPoly::monomial(5.0, 6.0)), MuntzPoly::monomial(6.0));
    EXPECT_EQ(antiderivative(MuntzPoly::constant(1.0)), MuntzPoly::monomial(1.0));
    EXPECT_TRUE(antiderivative(MuntzPoly{}).is_zero());
}

TEST(LinearCombine, Examples) {
    const MuntzPoly x = MuntzPoly::monomial(1.0);
    const MuntzPoly x2 = MuntzPoly::monomial(2.0);
    EXPECT_EQ(linear_combine(1.0, x, 1.0, x), MuntzPoly::monomial(1.0, 2.0));
    EXPECT_EQ(linear_combine(1.0, x + x2, -1.0, x2), x);
    EXPECT_TRUE(linear_combine(0.0, x, 0.0, x2).is_zero());
}

TEST(Multiply, Examples) {
    const MuntzPoly one = MuntzPoly::constant(1.0);
    const MuntzPoly x = MuntzPoly::monomial(1.0);
    EXPECT_EQ(multiply(x, MuntzPoly::monomial(2.0)), MuntzPoly::monomial(3.0));
    EXPECT_EQ(multiply(one + x, one - x), (MuntzPoly{{0.0, 1.0}, {2.0, -1.0}}));
    EXPECT_EQ(multiply(MuntzPoly::monomial(0.5), MuntzPoly::monomial(0.5)), x);
}

TEST(Multiply, TermCountBound) {
    oracle::Gen gen(5);
    for (int i = 0; i < 50; ++i) {
        const MuntzPoly f = to_poly(gen.expansion(gen.index(1, 5), 6.0));
        const MuntzPoly g = to_poly(gen.expansion(gen.index(1, 5), 6.0));
        EXPECT_LE(multiply(f, g).size(), f.size() * g.size());
    }
}

TEST(ExponentRule, Materialize) {
    EXPECT_EQ(ExponentRule::geometric(1.0, 2.0, 4).materialize(), (std::vector<double>{1, 2, 4, 8}));
    EXPECT_EQ(ExponentRule::power(2.0, 3).materialize(), (std::vector<double>{1, 4, 9}));
    EXPECT_EQ(ExponentRule::explicit_list({0.0, 0.5, 3.0}).materialize(), (std::vector<double>{0, 0.5, 3}));
    EXPECT_TRUE(ExponentRule::geometric(0.5, 1.5, 10).satisfies_muntz_condition());
}

TEST(ExponentRule, RejectsInvalidParameters) {
    EXPECT_THROW(ExponentRule::geometric(1.0, 1.0, 4), std::invalid_argument);
    EXPECT_THROW(ExponentRule::geometric(0.0, 2.0, 4), std::invalid_argument);
    EXPECT_THROW(ExponentRule::power(1.0, 4), std::invalid_argument);
    EXPECT_THROW(ExponentRule::explicit_list({1.0, 1.0}), std::invalid_argument);
    EXPECT_THROW(ExponentRule::explicit_list({-1.0}), std::invalid_argument);
    EXPECT_THROW(ExponentRule::explicit_list({}), std::invalid_argument);
    EXPECT_THROW((void)ExponentRule::geometric(1.0, 2.0, 2000).materialize(), std::overflow_error);
}

// --- properties --------------------------------------------------------------

TEST(PolyProperty, AntiderivativeMatchesQuadrature) {
    oracle::Gen gen(101);
    for (int i = 0; i < 100; ++i) {
        const auto f = gen.expansion(gen.index(1, 5), 8.0);
        const double x = gen.uniform(0.0, 1.0);
        const auto [ref, err] = oracle::integrate([&](double t) { return oracle::eval(f, t); }, 0.0, x, 1e-14);
        EXPECT_NEAR(antiderivative(to_poly(f)).eval(x), ref, err + 1e-12) << "case " << i;
    }
}

TEST(PolyProperty, LinearCombineIsPointwiseLinear) {
    oracle::Gen gen(102);
    for (int i = 0; i < 200; ++i) {
        const auto f = gen.expansion(gen.index(1, 6), 10.0);
        const auto g = gen.expansion(gen.index(1, 6), 10.0);
        const double alpha = gen.uniform(-3.0, 3.0), beta = gen.uniform(-3.0, 3.0);
        const double x = gen.uniform(0.0, 1.0);
        const double ref = alpha * oracle::eval(f, x) + beta * oracle::eval(g, x);
        double scale = 0.0;
        for (const auto& m : f) scale += std::abs(alpha * m.a);
        for (const auto& m : g) scale += std::abs(beta * m.a);
        EXPECT_NEAR(linear_combine(alpha, to_poly(f), beta, to_poly(g)).eval(x), ref, 1e-13 * scale);
    }
}

TEST(PolyProperty, MultiplyCommutesAndDistributes) {
    oracle::Gen gen(103);
    for (int i = 0; i < 50; ++i) {
        const MuntzPoly f = to_poly(gen.expansion(gen.index(1, 4), 5.0));
        const MuntzPoly g = to_poly(gen.expansion(gen.index(1, 4), 5.0));
        const MuntzPoly h = to_poly(gen.expansion(gen.index(1, 4), 5.0));
        const double a = gen.uniform(-2.0, 2.0), b = gen.uniform(-2.0, 2.0);
        const MuntzPoly fg = multiply(f, g), gf = multiply(g, f);
        const MuntzPoly lhs = multiply(f, linear_combine(a, g, b, h));
        const MuntzPoly rhs = linear_combine(a, multiply(f, g), b, multiply(f, h));
        for (int k = 0; k <= 100; ++k) {
            const double x = k / 100.0;
            EXPECT_NEAR(fg.eval(x), gf.eval(x), 1e-12);
            EXPECT_NEAR(lhs.eval(x), rhs.eval(x), 1e-12);
        }
    }
}

TEST(PolyProperty, ValueAtZeroIsRightLimit) {
    oracle::Gen gen(104);
    for (int i = 0; i < 200; ++i) {
        const auto f = gen.expansion(gen.index(1, 5), 4.0);
        const MuntzPoly p = to_poly(f);
        double least_positive = INFINITY, scale = 0.0;
        for (const auto& m : f) {
            if (m.e > 0.0) least_positive = std::min(least_positive, m.e);
            scale += std::abs(m.a);
        }
        // |f(x) - f(0)| <= sum |a| x^{least positive exponent}
        const double x = 1e-8;
        const double tol = std::isfinite(least_positive) ? scale * std::pow(x, least_positive) + 1e-15 : 1e-15;
        EXPECT_NEAR(p.eval(x), p.value_at_zero(), tol);
    }
}
