#pragma once

#include "xva/market_config.hpp"
#include "xva/solver.hpp"

namespace xva::breakdown {

/// The five Feynman-Kac terms of the linear (M = V) adjustment at t = 0.
struct XvaBreakdown {
    double cva = 0.0;
    double fbva = 0.0;
    double fcva = 0.0;
    double cra = 0.0;
    double kva = 0.0;

    double total() const noexcept { return -cva + fbva - fcva - cra - kva; }
};

struct Quadrature {
    int timePanels = 200;  // Simpson panels on [0, T], an even number
    int hermiteOrder = 64;
};

/// Each term is a Simpson rule in u over [0, T] of the discounted spread factor
/// times a Gauss-Hermite expectation over S_u of the integrand at V(u, S_u).
/// FBVA carries the negative part min(V - X, 0) with a leading minus.
XvaBreakdown xva_breakdown(double S, const OptionSpec& option, const MarketParams& market,
                           const CapitalParams& capital, const Quadrature& quadrature = {},
                           bool zeroCapital = false);

struct GarciaCheck {
    solver::SolveResult garcia;       // U
    solver::SolveResult capitalCost;  // U'
    double scale = 1.0;               // exp(-(gamma^K - r^B) T)
    double maxAbsDiff = 0.0;          // over all nodes
    double argmaxS = 0.0;
};

/// Solves both KVA equations on the config's mesh and compares U with the
/// rescaled U'. Requires phi = 1.
GarciaCheck garcia_scaling_check(const RunConfig& config, bool zeroCapital = false);

}  // namespace xva::breakdown
