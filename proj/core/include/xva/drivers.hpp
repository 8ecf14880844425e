#pragma once

#include <optional>

#include "xva/market_config.hpp"

namespace xva::drivers {

/// Right-hand side F of  dV/dt + A V = F(t, S, V).
enum class DriverKind {
    LinearMtmRiskFree,   ///< close-out at M = V (risk-free value), linear in the unknown
    NonlinearMtmRisky,   ///< close-out at M = V-hat, semilinear
    GarciaKVA,           ///< KVA with retained earnings as capital; unknown is U, M = V
    CapitalCostKVA,      ///< KVA-only counterpart U' discounted at r^B + lambda^C, M = V
    RiskFreeDiscount,    ///< F = r v; reproduces the risk-free price (test hook)
};

DriverKind driver_for(MtmConvention mtm);
bool needs_risk_free_value(DriverKind kind);
/// Terminal value: the payoff for price equations, zero for KVA equations.
bool has_payoff_terminal(DriverKind kind);

struct DriverContext {
    DriverKind kind = DriverKind::NonlinearMtmRisky;
    OptionSpec option;
    MarketParams market;
    CapitalParams capital;
    bool zeroCapital = false;  ///< test hook: K == 0
};

double collateral(double M, double gammaX);

/// X + R^C (M - X)^+ + (M - X)^-
double closeout_gC(double M, double X, double RC);

/// Capital term K(t, S, M), or zero under the zero-capital hook.
double capital_term(const DriverContext& ctx, double t, double S, double M);

/// Driver F at (t, S) for the current unknown v. `riskFree` is V(t, S) and is
/// required exactly when needs_risk_free_value(kind).
///
/// The counterparty close-out enters with coefficient lambda^C (1 - R^C) =
/// r^C - q^C > 0 on the positive exposure.
double driver_F(const DriverContext& ctx, double t, double S, double v,
                std::optional<double> riskFree = std::nullopt);

/// H(tau, S, v) = (sigma^2 - beta) v - F(T - tau, S, v).
double source_H(const DriverContext& ctx, double tau, double S, double v,
                std::optional<double> riskFree = std::nullopt);

/// Coefficients of  d_tau v + d_S f(S, v) = d_S(a(S) d_S v) + H.
struct ConservativeCoefficients {
    double sigma = 0.0;
    double convection = 0.0;  // sigma^2 - beta

    static ConservativeCoefficients from(const MarketParams& m) {
        return {m.sigma, m.convection()};
    }
    double a(double S) const noexcept { return 0.5 * sigma * sigma * S * S; }
    double f(double S, double v) const noexcept { return convection * S * v; }
    double G(double S, double q) const noexcept { return a(S) * q; }
};

}  // namespace xva::drivers
