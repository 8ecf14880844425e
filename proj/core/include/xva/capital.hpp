#pragma once

#include "xva/market_config.hpp"

namespace xva::capital {

/// Every intermediate of the SA-CCR exposure and the capital stack at one
/// (t, S, M) point. Market-risk capital is identically zero.
struct CapitalBreakdown {
    double supervisoryDelta = 0.0;
    double maturityFactor = 0.0;
    double addOn = 0.0;
    double replacementCost = 0.0;
    double multiplier = 1.0;
    double pfe = 0.0;
    double ead = 0.0;
    double effectiveMaturity = 0.0;
    double rwaCCR = 0.0;
    double rwaCVA = 0.0;
    double kCCR = 0.0;
    double kCVA = 0.0;
    double kLR = 0.0;
    double kTotal = 0.0;
};

/// Supervisory delta of a bought vanilla option with the 0.01 shift on spot
/// and strike. Throws for t >= T.
double supervisory_delta(const OptionSpec& option, double S, double t, double sigmaR);

/// sqrt(min(T - t + addDays / businessDays, 1)).
double maturity_factor(double t, double T, const CapitalParams& capital);

/// (1 - exp(-0.05 m)) / (0.05 m), with its series below m = 1e-6.
double cva_maturity_discount(double effectiveMaturity);

/// Exposure at default for mark-to-market M and collateral X. Fills the
/// exposure fields only (delta, MF, add-on, RC, multiplier, PFE, EAD).
/// A zero add-on takes multiplier 1 and PFE 0; EAD is floored at zero.
CapitalBreakdown ead_saccr(double M, double X, double S, double t, const OptionSpec& option,
                           const MarketParams& market, const CapitalParams& capital);

/// Full capital requirement K(t, S, M) with X = gamma_X M.
///
/// Times closer to maturity than one business day are clamped to T - 1/360
/// (more precisely 1/businessDaysPerYear) so the function is total on [0, T].
CapitalBreakdown capital_requirement(double t, double S, double M, const OptionSpec& option,
                                     const MarketParams& market, const CapitalParams& capital);

/// kTotal of capital_requirement.
double capital_total(double t, double S, double M, const OptionSpec& option,
                     const MarketParams& market, const CapitalParams& capital);

}  // namespace xva::capital
