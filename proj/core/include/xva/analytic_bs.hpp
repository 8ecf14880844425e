#pragma once

#include <functional>
#include <span>

#include "xva/market_config.hpp"

namespace xva::analytic {

/// Standard normal CDF via erfc; relative error near machine precision.
double normal_cdf(double x) noexcept;
double normal_pdf(double x) noexcept;

/// Risk-free value of the option at time t: discounted at r, drift beta = q_S - gamma_S.
double bs_value(const OptionSpec& option, double S, double t, const MarketParams& market);
double bs_delta(const OptionSpec& option, double S, double t, const MarketParams& market);
double bs_gamma(const OptionSpec& option, double S, double t, const MarketParams& market);

/// Transition law of S_u given S_t = spot under dS = beta S dt + sigma S dW.
struct LognormalKernel {
    double spot = 0.0;
    double drift = 0.0;
    double vol = 0.0;
    double horizon = 0.0;  // u - t
};

/// E[h(S_u) | S_t = spot] by Gauss-Hermite quadrature of the given order (>= 8).
/// A zero horizon (or zero vol) collapses to the point mass at the forward.
///
/// When `kinks` lists spot levels where h is not smooth (a strike, say), the
/// Gaussian integral is instead split at those levels and each piece of
/// [-10, 10] standard deviations is integrated with `quadratureOrder`
/// Gauss-Legendre points, which restores spectral accuracy for payoffs.
double lognormal_expectation(const std::function<double(double)>& h, const LognormalKernel& kernel,
                             int quadratureOrder, std::span<const double> kinks = {});

}  // namespace xva::analytic
