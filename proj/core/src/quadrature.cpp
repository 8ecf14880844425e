#include "xva/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include <Eigen/Dense>

#include "xva/error.hpp"

namespace xva::quad {

namespace {

// Returns (P_n(x), P_n'(x)) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
    double p0 = 1.0, p1 = x;
    for (int m = 2; m <= n; ++m) {
        const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p2;
    }
    return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

Rule gauss_legendre(int n) {
    if (n < 1) throw Error("gauss_legendre: need at least one node");
    if (n == 1) return Rule{{0.0}, {2.0}};
    Rule rule{std::vector<double>(n), std::vector<double>(n)};
    for (int i = 0; i < n / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            const auto [p, dp] = legendre(n, x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double dp = legendre(n, x).second;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) {
        const double dp = legendre(n, 0.0).second;
        rule.nodes[n / 2] = 0.0;
        rule.weights[n / 2] = 2.0 / (dp * dp);
    }
    return rule;
}

// Golub-Welsch on the Jacobi matrix of the probabilists' Hermite polynomials.
Rule gauss_hermite_normal(int n) {
    if (n < 1) throw Error("gauss_hermite_normal: need at least one node");
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) {
        J(i, i - 1) = std::sqrt(static_cast<double>(i));
        J(i - 1, i) = J(i, i - 1);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
    Rule rule{std::vector<double>(n), std::vector<double>(n)};
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = eig.eigenvalues()(i);
        const double v0 = eig.eigenvectors()(0, i);
        rule.weights[i] = v0 * v0;
    }
    // Symmetrize to kill eigen-solver round-off in the odd moments.
    for (int i = 0; i < n / 2; ++i) {
        const double x = 0.5 * (rule.nodes[n - 1 - i] - rule.nodes[i]);
        const double w = 0.5 * (rule.weights[n - 1 - i] + rule.weights[i]);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    double total = 0.0;
    for (double w : rule.weights) total += w;
    for (double& w : rule.weights) w /= total;
    return rule;
}

Rule simpson(double a, double b, int panels) {
    if (panels < 2 || panels % 2 != 0) throw Error("simpson: panels must be even and >= 2");
    const double h = (b - a) / panels;
    Rule rule{std::vector<double>(panels + 1), std::vector<double>(panels + 1)};
    for (int i = 0; i <= panels; ++i) {
        rule.nodes[i] = a + i * h;
        const double c = (i == 0 || i == panels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        rule.weights[i] = c * h / 3.0;
    }
    return rule;
}

}  // namespace xva::quad
