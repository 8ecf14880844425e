#include "xva/breakdown.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "xva/analytic_bs.hpp"
#include "xva/capital.hpp"
#include "xva/drivers.hpp"
#include "xva/error.hpp"
#include "xva/parallel.hpp"

namespace xva::breakdown {

XvaBreakdown xva_breakdown(double S, const OptionSpec& option, const MarketParams& market,
                           const CapitalParams& capital, const Quadrature& quadrature,
                           bool zeroCapital) {
    if (quadrature.timePanels < 2 || quadrature.timePanels % 2 != 0)
        throw Error("time panels must be a positive even number", "timePanels");
    const int n = quadrature.timePanels;
    const double T = option.maturity;
    const double du = T / n;
    const double rho = market.rB + market.lambdaC;
    const double kvaRate = market.gammaK - market.phi * market.rB;

    drivers::DriverContext ctx;
    ctx.kind = drivers::DriverKind::LinearMtmRiskFree;
    ctx.option = option;
    ctx.market = market;
    ctx.capital = capital;
    ctx.zeroCapital = zeroCapital;

    // Per time node: E[(V-X)^+], E[min(V-X, 0)], E[X], E[K].
    std::vector<std::array<double, 4>> node(n + 1);
    parallel_for(n + 1, [&](std::size_t i) {
        const double u = i * du;
        const analytic::LognormalKernel kernel{S, market.beta(), market.sigma, u};
        auto expect = [&](auto fn) {
            return analytic::lognormal_expectation(
                [&](double s) { return fn(s, analytic::bs_value(option, s, u, market)); }, kernel,
                quadrature.hermiteOrder);
        };
        node[i][0] = expect([&](double, double V) {
            return std::max(V - drivers::collateral(V, market.gammaX), 0.0);
        });
        node[i][1] = expect([&](double, double V) {
            return std::min(V - drivers::collateral(V, market.gammaX), 0.0);
        });
        node[i][2] = expect([&](double, double V) { return drivers::collateral(V, market.gammaX); });
        node[i][3] = expect([&](double s, double V) { return drivers::capital_term(ctx, u, s, V); });
    });

    std::array<double, 4> integral{};
    for (int i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        const double disc = std::exp(-rho * i * du);
        for (int c = 0; c < 4; ++c) integral[c] += w * disc * node[i][c];
    }
    for (double& v : integral) v *= du / 3.0;

    XvaBreakdown b;
    b.cva = market.counterpartySpread() * integral[0];
    b.fbva = -market.issuerSpread() * integral[1];
    b.fcva = market.issuerSpread() * integral[0];
    b.cra = (market.rX - market.r) * integral[2];
    b.kva = kvaRate * integral[3];
    return b;
}

GarciaCheck garcia_scaling_check(const RunConfig& config, bool zeroCapital) {
    if (config.market.phi != 1.0) throw Error("the scaling identity needs phi = 1", "phi");
    GarciaCheck out;
    solver::SolveOptions opt;
    opt.zeroCapital = zeroCapital;
    opt.driver = drivers::DriverKind::GarciaKVA;
    out.garcia = solver::solve(config, opt);
    opt.driver = drivers::DriverKind::CapitalCostKVA;
    out.capitalCost = solver::solve(config, opt);
    out.scale = std::exp(-(config.market.gammaK - config.market.rB) * config.option.maturity);

    const Eigen::VectorXd diff =
        out.garcia.valueField.coeffs - out.scale * out.capitalCost.valueField.coeffs;
    Eigen::Index at = 0;
    out.maxAbsDiff = diff.cwiseAbs().maxCoeff(&at);
    const auto& space = *out.garcia.valueField.space;
    const int bs = space.basis().size();
    out.argmaxS = space.point(static_cast<int>(at / bs), static_cast<int>(at % bs));
    return out;
}

}  // namespace xva::breakdown
