#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "raggain/error.hpp"
#include "raggain/stats.hpp"

namespace raggain {
namespace {

using Vec = std::vector<double>;

struct WilliamsCase {
    double r12, r13, r23;
    std::size_t n;
    double t, p;
};

// Reference values from an independent implementation (scipy t distribution).
const WilliamsCase kWilliamsTable[] = {
    {0.5, 0.3, 0.2, 100, 1.7979817313602, 0.0752908687112386},
    {0.45, 0.2, 0.6, 50, 2.1492410021257, 0.0367956614781406},
    {0.1, 0.05, 0.9, 3600, 6.76798418169825, 1.51854592825543e-11},
    {0.3, 0.1, -0.2, 30, 0.700578775775158, 0.489559676627041},
    {-0.2, 0.4, 0.1, 25, -2.36721703999975, 0.0271384717823296},
    {0.49, 0.45, 0.7, 3600, 3.59231122077036, 0.000332144796767522},
    {0.8, 0.6, 0.5, 10, 0.909593195402072, 0.393277734703223},
    {0.25, 0.3, 0.95, 200, -2.34255495038761, 0.0201501889564446},
    {0.6, 0.1, 0.3, 8, 1.1725075502683, 0.293810620203483},
    {0.15, 0.12, 0.4, 1000, 0.875493284166853, 0.381516430002668},
    {0.7, 0.69, 0.99, 500, 2.20833830722371, 0.0276764216805457},
    {0.33, -0.33, 0.0, 40, 3.20974768231027, 0.00274540563350724},
};

TEST(Pearson, Examples) {
    const Vec xs{1, 2, 3, 4};
    EXPECT_NEAR(pearson(xs, Vec{1, 3, 2, 4}), 0.8, 1e-12);
    EXPECT_NEAR(pearson(xs, Vec{2, 4, 6, 8}), 1.0, 1e-12);
    EXPECT_NEAR(pearson(xs, Vec{6, 5, 4, 3}), -1.0, 1e-12);
}

TEST(Pearson, Errors) {
    EXPECT_THROW(pearson(Vec{1, 2}, Vec{1, 2}), Error);
    EXPECT_THROW(pearson(Vec{1, 2, 3}, Vec{1, 2}), Error);
    EXPECT_THROW(pearson(Vec{1, 1, 1}, Vec{1, 2, 3}), Error);
    EXPECT_THROW(pearson(Vec{1, 2, 3}, Vec{4, 4, 4}), Error);
}

TEST(Pearson, AffineBehaviour) {
    std::mt19937_64 rng(51);
    std::normal_distribution<double> z;
    for (int trial = 0; trial < 200; ++trial) {
        Vec xs(30), ys(30);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            xs[i] = z(rng);
            ys[i] = 0.5 * xs[i] + z(rng);
        }
        const double r = pearson(xs, ys);
        EXPECT_GE(r, -1.0);
        EXPECT_LE(r, 1.0);
        Vec scaled = xs, negated = ys;
        for (auto& x : scaled) x = 3.0 * x + 7.0;
        for (auto& y : negated) y = -2.0 * y;
        EXPECT_NEAR(pearson(scaled, ys), r, 1e-12);
        EXPECT_NEAR(pearson(xs, negated), -r, 1e-12);
        EXPECT_NEAR(pearson(ys, xs), r, 1e-15);
    }
}

TEST(IncompleteBeta, ClosedForms) {
    for (double x : {0.0, 0.1, 0.37, 0.5, 0.92, 1.0}) {
        EXPECT_NEAR(regularized_incomplete_beta(x, 1.0, 1.0), x, 1e-12);
        EXPECT_NEAR(regularized_incomplete_beta(x, 3.0, 1.0), std::pow(x, 3.0), 1e-12);
        EXPECT_NEAR(regularized_incomplete_beta(x, 1.0, 2.5), 1.0 - std::pow(1.0 - x, 2.5), 1e-12);
        EXPECT_NEAR(regularized_incomplete_beta(x, 2.0, 3.5) + regularized_incomplete_beta(1.0 - x, 3.5, 2.0),
                    1.0, 1e-12);
    }
    EXPECT_THROW(regularized_incomplete_beta(1.5, 1.0, 1.0), Error);
    EXPECT_THROW(regularized_incomplete_beta(0.5, 0.0, 1.0), Error);
}

TEST(StudentT, ClosedForms) {
    for (double t : {0.0, 0.3, 1.0, 2.5, 10.0, -4.0}) {
        // One degree of freedom is the Cauchy distribution.
        EXPECT_NEAR(student_t_two_tailed_p(t, 1.0), 1.0 - 2.0 / std::numbers::pi * std::atan(std::abs(t)), 1e-12);
        EXPECT_NEAR(student_t_two_tailed_p(t, 2.0), 1.0 - std::abs(t) / std::sqrt(2.0 + t * t), 1e-12);
    }
    EXPECT_EQ(student_t_two_tailed_p(0.0, 17.0), 1.0);
    EXPECT_LT(student_t_two_tailed_p(1e6, 10.0), 1e-40);
}

TEST(Williams, MatchesReferenceTable) {
    for (const auto& c : kWilliamsTable) {
        const auto w = williams_test(c.r12, c.r13, c.r23, c.n);
        EXPECT_NEAR(w.t, c.t, 1e-6) << c.r12 << " " << c.r13 << " " << c.r23 << " " << c.n;
        EXPECT_NEAR(w.p, c.p, 1e-6) << c.r12 << " " << c.r13 << " " << c.r23 << " " << c.n;
    }
}

TEST(Williams, EqualCorrelationsGiveOne) {
    for (double r23 : {-0.5, 0.0, 0.8}) {
        const auto w = williams_test(0.4, 0.4, r23, 50);
        EXPECT_EQ(w.t, 0.0);
        EXPECT_EQ(w.p, 1.0);
    }
}

TEST(Williams, SwapNegatesT) {
    for (const auto& c : kWilliamsTable) {
        const auto a = williams_test(c.r12, c.r13, c.r23, c.n);
        const auto b = williams_test(c.r13, c.r12, c.r23, c.n);
        EXPECT_EQ(a.t, -b.t);
        EXPECT_EQ(a.p, b.p);
    }
}

TEST(Williams, Errors) {
    EXPECT_THROW(williams_test(0.5, 0.3, 0.2, 3), Error);
    EXPECT_THROW(williams_test(1.0, 0.3, 0.2, 30), Error);
    EXPECT_THROW(williams_test(0.5, -1.0, 0.2, 30), Error);
    // K = 1 - 3(0.81) - 2(0.729) < 0
    EXPECT_THROW(williams_test(0.9, -0.9, 0.9, 30), Error);
}

}  // namespace
}  // namespace raggain
