#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "xva/drivers.hpp"
#include "xva/market_config.hpp"

namespace xva::fbsde {

/// Strata are equal cells in log S over [e^logMin, e^logMax].
struct RegressionGrid {
    int strata = 500;
    double logMin = -5.0;
    double logMax = 5.0;
    int pathsPerStratum = 10000;
    int timeSteps = 20;

    double lower(int s) const noexcept;
    double upper(int s) const noexcept;
    /// Stratum of S; spots outside the domain map to the end strata.
    int locate(double S) const noexcept;
    void validate() const;
};

/// Whole paths started log-uniformly inside each stratum. Memory grows as
/// strata * paths * (steps + 1); intended for diagnostics on small grids.
struct PathEnsemble {
    RegressionGrid grid;
    double maturity = 0.0;
    std::uint64_t seed = 0;
    /// states[s][p * (steps + 1) + i] = S_{t_i} on path p of stratum s.
    std::vector<std::vector<double>> states;

    double state(int stratum, int path, int step) const {
        return states[stratum][static_cast<std::size_t>(path) * (grid.timeSteps + 1) + step];
    }
};

/// Exact geometric Brownian motion with drift q_S - gamma_S.
PathEnsemble simulate_forward(const RegressionGrid& grid, const MarketParams& market,
                              double maturity, std::uint64_t seed);

/// Driver F(t, S, y) of  dY = F dt + Z dW, matching  V_t + A V = F.
using DriverFn = std::function<double(double t, double S, double y)>;
/// Terminal condition g(S).
using TerminalFn = std::function<double(double S)>;

DriverFn make_driver(const drivers::DriverContext& ctx);

/// Per-stratum affine fit y = c0 + c1 S at one time level.
struct StratumFit {
    double c0 = 0.0;
    double c1 = 0.0;
    double residualVariance = 0.0;
    /// (X^T X)^{-1} entries, for the prediction variance.
    double i00 = 0.0;
    double i01 = 0.0;
    double i11 = 0.0;
    bool constantFallback = false;
};

/// Known baseline b(t, S) with an exact one-step conditional mean
/// m(t, S_0, dt) = E[b(t + dt, S_{t+dt}) | S_t = S_0]. When present, the
/// regression represents Y_i = b(t_i, .) + affine, so only the (small) gap to
/// the baseline is fitted and the baseline's martingale noise drops out.
struct Baseline {
    std::function<double(double t, double S)> value;
    std::function<double(double t, double S0, double dt)> conditionalMean;
};

/// The risk-free price: E[V(t + dt, S')] = e^{r dt} V(t, S_0).
Baseline risk_free_baseline(const OptionSpec& option, const MarketParams& market);

/// Regressed t = 0 solution with its regression standard error.
class BackwardSolution {
public:
    BackwardSolution(RegressionGrid grid, std::vector<StratumFit> fits,
                     std::function<double(double)> baseline = {})
        : grid_(grid), fits_(std::move(fits)), baseline_(std::move(baseline)) {}

    double value(double S) const;
    /// Standard error of the t = 0 regression at S.
    double std_error(double S) const;
    const std::vector<StratumFit>& fits() const noexcept { return fits_; }
    /// Strata that fell back to a constant fit anywhere in the recursion.
    int fallbacks = 0;

private:
    RegressionGrid grid_;
    std::vector<StratumFit> fits_;
    std::function<double(double)> baseline_;  // b(0, .) or empty
};

struct BackwardOptions {
    unsigned threads = 0;  // 0: all cores
    const Baseline* baseline = nullptr;
    /// Weight of the driver at t_i. 0 is the fully explicit scheme; otherwise
    /// Y_i enters F through an explicit predictor fitted on the same samples.
    double theta = 0.5;
};

/// Stratified regression: at every step t_i and every stratum, fresh points
/// are drawn log-uniformly in the stratum and advanced exactly to t_{i+1};
/// the responses
///   Y_{i+1}(S') - (1 - theta) F(t_{i+1}, S', Y_{i+1}(S')) dt - theta F(t_i, S, Y~_i(S)) dt
/// are regressed on an affine function of S (minus the baseline when one is
/// given). The stream of (stratum, step) is seeded from (seed, step, stratum),
/// so results do not depend on the thread count.
BackwardSolution solve_backward(const RegressionGrid& grid, const MarketParams& market,
                                double maturity, const DriverFn& driver,
                                const TerminalFn& terminal, std::uint64_t seed,
                                const BackwardOptions& options = {});

struct McEstimate {
    double S = 0.0;
    double value = 0.0;
    double xva = 0.0;
    double stdError = 0.0;
};

struct McOptions {
    unsigned threads = 0;
    bool useBaseline = true;  // regress the gap to the risk-free price
    double theta = 0.5;
};

/// XVA_MC(S) = Y_0(S) - bs_value(S, 0) at each spot, for a price driver.
std::vector<McEstimate> xva_mc(const RegressionGrid& grid, const drivers::DriverContext& ctx,
                               const std::vector<double>& spots, std::uint64_t seed,
                               const McOptions& options = {});

}  // namespace xva::fbsde
