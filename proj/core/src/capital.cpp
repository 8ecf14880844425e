#include "xva/capital.hpp"

#include <algorithm>
#include <cmath>

#include "xva/analytic_bs.hpp"
#include "xva/error.hpp"

namespace xva::capital {

namespace {

constexpr double kSupervisoryShift = 0.01;
constexpr double kCcrScaling = 12.5;
constexpr double kCvaScaling = 12.5 * 0.65;
constexpr double kCvaDiscountRate = 0.05;

}  // namespace

double supervisory_delta(const OptionSpec& option, double S, double t, double sigmaR) {
    const double tau = option.maturity - t;
    if (!(tau > 0.0)) throw Error("supervisory_delta: undefined at or after maturity", "t");
    const double sd = sigmaR * std::sqrt(tau);
    const double x =
        (std::log((S + kSupervisoryShift) / (option.strike + kSupervisoryShift)) +
         0.5 * sigmaR * sigmaR * tau) / sd;
    return option.kind == OptionKind::Call ? analytic::normal_cdf(x)
                                           : -analytic::normal_cdf(-x);
}

double maturity_factor(double t, double T, const CapitalParams& capital) {
    const double addOn =
        static_cast<double>(capital.dayCountAddDays) / capital.businessDaysPerYear;
    return std::sqrt(std::min((T - t) + addOn, 1.0));
}

double cva_maturity_discount(double m) {
    const double x = kCvaDiscountRate * m;
    if (m < 1e-6) return 1.0 - 0.5 * x + x * x / 6.0;
    return -std::expm1(-x) / x;
}

CapitalBreakdown ead_saccr(double M, double X, double S, double t, const OptionSpec& option,
                           const MarketParams& /*market*/, const CapitalParams& capital) {
    CapitalBreakdown b;
    b.supervisoryDelta = supervisory_delta(option, S, t, capital.sigmaR);
    b.maturityFactor = maturity_factor(t, option.maturity, capital);
    b.addOn = capital.SF * S * b.maturityFactor * b.supervisoryDelta;
    b.replacementCost = std::max(M - X, 0.0);
    if (b.addOn == 0.0) {
        b.multiplier = 1.0;
        b.pfe = 0.0;
    } else {
        const double floor = capital.multiplierFloor;
        const double exponent = (M - X) / (2.0 * (1.0 - floor) * b.addOn);
        b.multiplier = std::min(1.0, floor + capital.multiplierSlope * std::exp(exponent));
        b.pfe = b.multiplier * b.addOn;
    }
    b.ead = std::max(capital.alpha * (b.replacementCost + b.pfe), 0.0);
    return b;
}

CapitalBreakdown capital_requirement(double t, double S, double M, const OptionSpec& option,
                                     const MarketParams& market, const CapitalParams& capital) {
    const double minHorizon = 1.0 / capital.businessDaysPerYear;
    const double tEff = std::min(t, option.maturity - minHorizon);
    const double X = market.gammaX * M;

    CapitalBreakdown b = ead_saccr(M, X, S, tEff, option, market, capital);
    b.effectiveMaturity = std::min(1.0, option.maturity - tEff);
    b.rwaCCR = capital.omega * kCcrScaling * b.ead;
    b.rwaCVA = kCvaScaling / capital.alpha * capital.RW * b.effectiveMaturity * b.ead *
               cva_maturity_discount(b.effectiveMaturity);
    b.kCCR = capital.eta * b.rwaCCR;
    b.kCVA = capital.eta * b.rwaCVA;
    b.kLR = std::max(capital.LR * (std::max(M, 0.0) + b.addOn), 0.0);
    b.kTotal = std::max(b.kCCR + b.kCVA, b.kLR);
    return b;
}

double capital_total(double t, double S, double M, const OptionSpec& option,
                     const MarketParams& market, const CapitalParams& capital) {
    return capital_requirement(t, S, M, option, market, capital).kTotal;
}

}  // namespace xva::capital
