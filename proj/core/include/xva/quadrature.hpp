#pragma once

#include <vector>

namespace xva::quad {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1], exact to degree 2n-1.
Rule gauss_legendre(int n);

/// n-point Gauss-Hermite rule for the standard normal weight; weights sum to 1.
Rule gauss_hermite_normal(int n);

/// Composite Simpson nodes and weights on [a, b] with an even number of panels.
Rule simpson(double a, double b, int panels);

}  // namespace xva::quad
