#include "xva/drivers.hpp"

#include <algorithm>

#include "xva/capital.hpp"
#include "xva/error.hpp"

namespace xva::drivers {

DriverKind driver_for(MtmConvention mtm) {
    switch (mtm) {
        case MtmConvention::RiskFree: return DriverKind::LinearMtmRiskFree;
        case MtmConvention::Risky: return DriverKind::NonlinearMtmRisky;
        case MtmConvention::GarciaKVA: return DriverKind::GarciaKVA;
    }
    return DriverKind::NonlinearMtmRisky;
}

bool needs_risk_free_value(DriverKind kind) {
    return kind == DriverKind::LinearMtmRiskFree || kind == DriverKind::GarciaKVA ||
           kind == DriverKind::CapitalCostKVA;
}

bool has_payoff_terminal(DriverKind kind) {
    return kind != DriverKind::GarciaKVA && kind != DriverKind::CapitalCostKVA;
}

double collateral(double M, double gammaX) { return gammaX * M; }

double closeout_gC(double M, double X, double RC) {
    const double net = M - X;
    return X + RC * std::max(net, 0.0) + std::min(net, 0.0);
}

double capital_term(const DriverContext& ctx, double t, double S, double M) {
    if (ctx.zeroCapital) return 0.0;
    return capital::capital_total(t, S, M, ctx.option, ctx.market, ctx.capital);
}

double driver_F(const DriverContext& ctx, double t, double S, double v,
                std::optional<double> riskFree) {
    const auto& m = ctx.market;
    if (needs_risk_free_value(ctx.kind) && !riskFree)
        throw Error("driver_F: risk-free value required for this driver kind", "riskFree");

    const double capitalCost = m.gammaK - m.phi * m.rB;
    switch (ctx.kind) {
        case DriverKind::LinearMtmRiskFree: {
            const double V = *riskFree;
            const double X = collateral(V, m.gammaX);
            return (m.rB + m.lambdaC) * v - m.lambdaC * V +
                   m.counterpartySpread() * std::max(V - X, 0.0) + (m.rX - m.rB) * X +
                   capitalCost * capital_term(ctx, t, S, V);
        }
        case DriverKind::NonlinearMtmRisky: {
            const double X = collateral(v, m.gammaX);
            return m.rB * v + m.counterpartySpread() * std::max(v - X, 0.0) +
                   (m.rX - m.rB) * X + capitalCost * capital_term(ctx, t, S, v);
        }
        case DriverKind::GarciaKVA:
            return (m.gammaK + m.lambdaC) * v +
                   (m.gammaK - m.rB) * capital_term(ctx, t, S, *riskFree);
        case DriverKind::CapitalCostKVA:
            return (m.rB + m.lambdaC) * v + capitalCost * capital_term(ctx, t, S, *riskFree);
        case DriverKind::RiskFreeDiscount:
            return m.r * v;
    }
    return 0.0;
}

double source_H(const DriverContext& ctx, double tau, double S, double v,
                std::optional<double> riskFree) {
    return ctx.market.convection() * v -
           driver_F(ctx, ctx.option.maturity - tau, S, v, riskFree);
}

}  // namespace xva::drivers
