#include "xva/fbsde_mc.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <random>

#include "xva/analytic_bs.hpp"
#include "xva/error.hpp"
#include "xva/parallel.hpp"

namespace xva::fbsde {

double RegressionGrid::lower(int s) const noexcept {
    return std::exp(logMin + (logMax - logMin) * s / strata);
}

double RegressionGrid::upper(int s) const noexcept {
    return std::exp(logMin + (logMax - logMin) * (s + 1) / strata);
}

int RegressionGrid::locate(double S) const noexcept {
    if (!(S > 0.0)) return 0;
    const double x = (std::log(S) - logMin) / (logMax - logMin) * strata;
    if (x < 0.0) return 0;
    return std::min(strata - 1, static_cast<int>(x));
}

void RegressionGrid::validate() const {
    if (strata < 1) throw Error("need at least one stratum", "strata");
    if (!(logMax > logMin)) throw Error("empty log-spot domain", "log_max");
    if (pathsPerStratum < 3) throw Error("need at least three paths per stratum", "paths");
    if (timeSteps < 1) throw Error("need at least one time step", "time_steps");
}

namespace {

std::mt19937_64 stream(std::uint64_t seed, int step, int stratum) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(stratum)};
    return std::mt19937_64(seq);
}

double draw_start(const RegressionGrid& grid, int s, std::mt19937_64& rng) {
    const double width = (grid.logMax - grid.logMin) / grid.strata;
    const double a = grid.logMin + width * s;
    return std::exp(a + width * std::uniform_real_distribution<double>(0.0, 1.0)(rng));
}

StratumFit fit_affine(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    StratumFit f;
    // centred normal equations; a degenerate spread means a constant fit
    if (!(sxx > 1e-14 * std::max(1.0, mx * mx) * n)) {
        f.constantFallback = true;
        f.c0 = my;
        double rss = 0;
        for (double v : y) rss += (v - my) * (v - my);
        f.residualVariance = rss / std::max(1.0, n - 1);
        f.i00 = 1.0 / n;
        return f;
    }
    f.c1 = sxy / sxx;
    f.c0 = my - f.c1 * mx;
    double rss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - f.c0 - f.c1 * x[i];
        rss += r * r;
    }
    f.residualVariance = rss / (n - 2);
    f.i11 = 1.0 / sxx;
    f.i01 = -mx / sxx;
    f.i00 = 1.0 / n + mx * mx / sxx;
    return f;
}

double evaluate(const RegressionGrid& grid, const std::vector<StratumFit>& fits, double S) {
    const auto& f = fits[grid.locate(S)];
    return f.c0 + f.c1 * S;
}

}  // namespace

double BackwardSolution::value(double S) const {
    return evaluate(grid_, fits_, S) + (baseline_ ? baseline_(S) : 0.0);
}

double BackwardSolution::std_error(double S) const {
    const auto& f = fits_[grid_.locate(S)];
    const double var = f.i00 + 2.0 * f.i01 * S + f.i11 * S * S;
    return std::sqrt(std::max(0.0, f.residualVariance * var));
}

PathEnsemble simulate_forward(const RegressionGrid& grid, const MarketParams& market,
                              double maturity, std::uint64_t seed) {
    grid.validate();
    PathEnsemble ens;
    ens.grid = grid;
    ens.maturity = maturity;
    ens.seed = seed;
    ens.states.resize(grid.strata);
    const double dt = maturity / grid.timeSteps;
    const double drift = (market.beta() - 0.5 * market.sigma * market.sigma) * dt;
    const double vol = market.sigma * std::sqrt(dt);
    const int stride = grid.timeSteps + 1;
    parallel_for(grid.strata, [&](std::size_t s) {
        auto rng = stream(seed, -1, static_cast<int>(s));
        std::normal_distribution<double> normal;
        auto& out = ens.states[s];
        out.resize(static_cast<std::size_t>(grid.pathsPerStratum) * stride);
        for (int p = 0; p < grid.pathsPerStratum; ++p) {
            double S = draw_start(grid, static_cast<int>(s), rng);
            out[static_cast<std::size_t>(p) * stride] = S;
            for (int i = 1; i <= grid.timeSteps; ++i) {
                S *= std::exp(drift + vol * normal(rng));
                out[static_cast<std::size_t>(p) * stride + i] = S;
            }
        }
    });
    return ens;
}

Baseline risk_free_baseline(const OptionSpec& option, const MarketParams& market) {
    Baseline cv;
    cv.value = [option, market](double t, double S) {
        return analytic::bs_value(option, S, t, market);
    };
    cv.conditionalMean = [option, market](double t, double S0, double dt) {
        return std::exp(market.r * dt) * analytic::bs_value(option, S0, t, market);
    };
    return cv;
}

DriverFn make_driver(const drivers::DriverContext& ctx) {
    return [ctx](double t, double S, double y) {
        std::optional<double> V;
        if (drivers::needs_risk_free_value(ctx.kind))
            V = analytic::bs_value(ctx.option, S, t, ctx.market);
        return drivers::driver_F(ctx, t, S, y, V);
    };
}

BackwardSolution solve_backward(const RegressionGrid& grid, const MarketParams& market,
                                double maturity, const DriverFn& driver,
                                const TerminalFn& terminal, std::uint64_t seed,
                                const BackwardOptions& options) {
    grid.validate();
    if (!(options.theta >= 0.0 && options.theta <= 1.0))
        throw Error("theta must lie in [0, 1]", "theta");
    const Baseline* base = options.baseline;
    const double theta = options.theta;
    const double dt = maturity / grid.timeSteps;
    const double drift = (market.beta() - 0.5 * market.sigma * market.sigma) * dt;
    const double vol = market.sigma * std::sqrt(dt);

    // Fits of Y_{i+1} - b(t_{i+1}, .); empty means the terminal function.
    std::vector<StratumFit> next;
    std::vector<StratumFit> current(grid.strata);
    int fallbacks = 0;
    for (int i = grid.timeSteps - 1; i >= 0; --i) {
        const double t = i * dt;
        const double tNext = (i + 1) * dt;
        std::vector<int> fell(grid.strata, 0);
        parallel_for(
            grid.strata,
            [&](std::size_t s) {
                auto rng = stream(seed, i, static_cast<int>(s));
                std::normal_distribution<double> normal;
                const int n = grid.pathsPerStratum;
                // y holds the response without the driver; b0 the baseline at (t_i, S_0)
                std::vector<double> x(n), y(n), f1(n), b0(base ? n : 0);
                for (int p = 0; p < n; ++p) {
                    const double S0 = draw_start(grid, static_cast<int>(s), rng);
                    const double S1 = S0 * std::exp(drift + vol * normal(rng));
                    x[p] = S0;
                    if (base) {
                        const double b1 = base->value(tNext, S1);
                        const double gap = next.empty() ? terminal(S1) - b1
                                                        : evaluate(grid, next, S1);
                        b0[p] = base->value(t, S0);
                        f1[p] = driver(tNext, S1, b1 + gap) * dt;
                        y[p] = gap + base->conditionalMean(t, S0, dt) - b0[p];
                    } else {
                        const double y1 = next.empty() ? terminal(S1) : evaluate(grid, next, S1);
                        f1[p] = driver(tNext, S1, y1) * dt;
                        y[p] = y1;
                    }
                }
                if (theta == 0.0) {
                    for (int p = 0; p < n; ++p) y[p] -= f1[p];
                } else {
                    std::vector<double> pred(n);
                    for (int p = 0; p < n; ++p) pred[p] = y[p] - f1[p];
                    const StratumFit predictor = fit_affine(x, pred);
                    for (int p = 0; p < n; ++p) {
                        const double yi =
                            predictor.c0 + predictor.c1 * x[p] + (base ? b0[p] : 0.0);
                        y[p] -= (1.0 - theta) * f1[p] + theta * driver(t, x[p], yi) * dt;
                    }
                }
                current[s] = fit_affine(x, y);
                fell[s] = current[s].constantFallback ? 1 : 0;
            },
            options.threads);
        for (int f : fell) fallbacks += f;
        next = current;
    }
    if (fallbacks > 0)
        std::clog << "fbsde: " << fallbacks << " stratum regressions fell back to a constant fit\n";
    std::function<double(double)> b0;
    if (base) b0 = [fn = base->value](double S) { return fn(0.0, S); };
    BackwardSolution sol(grid, std::move(next), std::move(b0));
    sol.fallbacks = fallbacks;
    return sol;
}

std::vector<McEstimate> xva_mc(const RegressionGrid& grid, const drivers::DriverContext& ctx,
                               const std::vector<double>& spots, std::uint64_t seed,
                               const McOptions& options) {
    if (!drivers::has_payoff_terminal(ctx.kind))
        throw Error("xva_mc needs a price driver", "driver");
    const OptionSpec option = ctx.option;
    const Baseline cv = risk_free_baseline(option, ctx.market);
    auto sol = solve_backward(
        grid, ctx.market, option.maturity, make_driver(ctx),
        [option](double S) { return payoff(option, S); }, seed,
        BackwardOptions{options.threads, options.useBaseline ? &cv : nullptr, options.theta});
    std::vector<McEstimate> out;
    for (double S : spots) {
        McEstimate e;
        e.S = S;
        e.value = sol.value(S);
        e.xva = e.value - analytic::bs_value(option, S, 0.0, ctx.market);
        e.stdError = sol.std_error(S);
        out.push_back(e);
    }
    return out;
}

}  // namespace xva::fbsde
