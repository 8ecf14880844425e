#include "xva/analytic_bs.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include "xva/error.hpp"
#include "xva/quadrature.hpp"

namespace xva::analytic {

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) noexcept {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

namespace {

struct Moneyness {
    double d1;
    double d2;
};

Moneyness moneyness(double S, double K, double tau, const MarketParams& m) {
    const double sd = m.sigma * std::sqrt(tau);
    const double d1 = (std::log(S / K) + (m.beta() + 0.5 * m.sigma * m.sigma) * tau) / sd;
    return {d1, d1 - sd};
}

}  // namespace

double bs_value(const OptionSpec& option, double S, double t, const MarketParams& market) {
    const double tau = option.maturity - t;
    if (tau <= 0.0) return payoff(option, S);
    const double K = option.strike;
    const double df = std::exp(-market.r * tau);
    if (S <= 0.0) return option.kind == OptionKind::Call ? 0.0 : K * df;
    const double F = S * std::exp(market.beta() * tau);
    const auto [d1, d2] = moneyness(S, K, tau, market);
    if (option.kind == OptionKind::Call) return df * (F * normal_cdf(d1) - K * normal_cdf(d2));
    return df * (K * normal_cdf(-d2) - F * normal_cdf(-d1));
}

double bs_delta(const OptionSpec& option, double S, double t, const MarketParams& market) {
    const double tau = option.maturity - t;
    const bool call = option.kind == OptionKind::Call;
    if (tau <= 0.0) {
        if (call) return S > option.strike ? 1.0 : 0.0;
        return S < option.strike ? -1.0 : 0.0;
    }
    const double carry = std::exp((market.beta() - market.r) * tau);
    if (S <= 0.0) return call ? 0.0 : -carry;
    const double d1 = moneyness(S, option.strike, tau, market).d1;
    return call ? carry * normal_cdf(d1) : carry * (normal_cdf(d1) - 1.0);
}

double bs_gamma(const OptionSpec& option, double S, double t, const MarketParams& market) {
    const double tau = option.maturity - t;
    if (tau <= 0.0 || S <= 0.0) return 0.0;
    const double carry = std::exp((market.beta() - market.r) * tau);
    const double d1 = moneyness(S, option.strike, tau, market).d1;
    return carry * normal_pdf(d1) / (S * market.sigma * std::sqrt(tau));
}

namespace {

const quad::Rule& hermite_rule(int order) {
    static std::mutex mutex;
    static std::map<int, quad::Rule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, quad::gauss_hermite_normal(order)).first;
    return it->second;
}

}  // namespace

double lognormal_expectation(const std::function<double(double)>& h, const LognormalKernel& k,
                             int quadratureOrder, std::span<const double> kinks) {
    if (quadratureOrder < 8) throw Error("lognormal_expectation: quadrature order must be >= 8");
    if (k.horizon < 0.0) throw Error("lognormal_expectation: negative horizon");
    const double forward = k.spot * std::exp(k.drift * k.horizon);
    if (k.horizon == 0.0 || k.vol == 0.0) return h(forward);
    const double sd = k.vol * std::sqrt(k.horizon);
    const double shift = -0.5 * sd * sd;
    if (!kinks.empty()) {
        constexpr double kTail = 10.0;
        std::vector<double> cuts{-kTail, kTail};
        for (double level : kinks) {
            if (level <= 0.0) continue;
            const double z = (std::log(level / forward) - shift) / sd;
            if (z > -kTail && z < kTail) cuts.push_back(z);
        }
        std::sort(cuts.begin(), cuts.end());
        const auto rule = quad::gauss_legendre(quadratureOrder);
        double sum = 0.0;
        for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
            const double mid = 0.5 * (cuts[s] + cuts[s + 1]);
            const double half = 0.5 * (cuts[s + 1] - cuts[s]);
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double z = mid + half * rule.nodes[i];
                sum += half * rule.weights[i] * normal_pdf(z) * h(forward * std::exp(shift + sd * z));
            }
        }
        return sum;
    }
    const auto& rule = hermite_rule(quadratureOrder);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * h(forward * std::exp(shift + sd * rule.nodes[i]));
    return sum;
}

}  // namespace xva::analytic
