#include <gtest/gtest.h>

#include <cmath>

#include "xva/error.hpp"
#include "xva/quadrature.hpp"

using namespace xva::quad;

TEST(Quadrature, GaussLegendreIsExactToDegree2nMinus1) {
    for (int n = 1; n <= 12; ++n) {
        const Rule r = gauss_legendre(n);
        ASSERT_EQ(r.nodes.size(), static_cast<std::size_t>(n));
        for (int p = 0; p <= 2 * n - 1; ++p) {
            double s = 0;
            for (int i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], p);
            const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
            EXPECT_NEAR(s, exact, 1e-13) << "n=" << n << " p=" << p;
        }
        for (int i = 1; i < n; ++i) EXPECT_LT(r.nodes[i - 1], r.nodes[i]);
    }
}

TEST(Quadrature, GaussLegendreTwoPoint) {
    const Rule r = gauss_legendre(2);
    EXPECT_NEAR(r.nodes[1], 1.0 / std::sqrt(3.0), 2e-16);
    EXPECT_NEAR(r.weights[0], 1.0, 1e-15);
}

TEST(Quadrature, GaussHermiteNormalMoments) {
    const Rule r = gauss_hermite_normal(40);
    double odd = 1.0;  // (2m-1)!!
    for (int m = 0; m <= 10; ++m) {
        if (m > 0) odd *= 2 * m - 1;
        double even = 0, skew = 0;
        for (std::size_t i = 0; i < r.nodes.size(); ++i) {
            even += r.weights[i] * std::pow(r.nodes[i], 2 * m);
            skew += r.weights[i] * std::pow(r.nodes[i], 2 * m + 1);
        }
        EXPECT_NEAR(even / odd, 1.0, 1e-12) << m;
        EXPECT_NEAR(skew, 0.0, 1e-9 * odd);
    }
}

TEST(Quadrature, SimpsonIsExactForCubics) {
    const Rule r = simpson(0.5, 2.0, 6);
    EXPECT_EQ(r.nodes.size(), 7u);
    double s = 0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], 3);
    EXPECT_NEAR(s, (16.0 - 0.0625) / 4.0, 1e-13);
    EXPECT_THROW(simpson(0.0, 1.0, 3), xva::Error);
}

TEST(Quadrature, RejectsEmptyRules) {
    EXPECT_THROW(gauss_legendre(0), xva::Error);
    EXPECT_THROW(gauss_hermite_normal(0), xva::Error);
}
