#include <benchmark/benchmark.h>

#include "xva/analytic_bs.hpp"
#include "xva/capital.hpp"
#include "xva/fbsde_mc.hpp"
#include "xva/ldg.hpp"
#include "xva/solver.hpp"

using namespace xva;

namespace {

std::shared_ptr<const ldg::LdgOperators> operators(int cells, int degree) {
    auto space = std::make_shared<const ldg::Space>(ldg::Mesh(60.0, cells), degree);
    return std::make_shared<const ldg::LdgOperators>(
        space, ldg::FluxVariant::A1_CallBC,
        drivers::ConservativeCoefficients::from(default_config().market));
}

}  // namespace

static void BM_OperatorAssembly(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(operators(static_cast<int>(state.range(0)), 1));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_OperatorAssembly)->RangeMultiplier(2)->Range(80, 1280)->Complexity();

static void BM_DiffusionResidual(benchmark::State& state) {
    const auto ops = operators(static_cast<int>(state.range(0)), 1);
    const Eigen::VectorXd u = Eigen::VectorXd::Random(ops->space()->dofs());
    for (auto _ : state) benchmark::DoNotOptimize(ops->diffusion(u));
}
BENCHMARK(BM_DiffusionResidual)->Arg(640)->Arg(1280);

static void BM_ConvectionResidual(benchmark::State& state) {
    const auto ops = operators(static_cast<int>(state.range(0)), 1);
    const Eigen::VectorXd u = Eigen::VectorXd::Random(ops->space()->dofs());
    for (auto _ : state) benchmark::DoNotOptimize(ops->form_C(u));
}
BENCHMARK(BM_ConvectionResidual)->Arg(640)->Arg(1280);

static void BM_ImplicitFactorize(benchmark::State& state) {
    const auto ops = operators(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(ops->assemble_implicit(0.003));
}
BENCHMARK(BM_ImplicitFactorize)->Args({640, 1})->Args({640, 2});

static void BM_ImplicitSolve(benchmark::State& state) {
    const auto ops = operators(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    const auto imp = ops->assemble_implicit(0.003);
    const Eigen::VectorXd b = Eigen::VectorXd::Random(ops->space()->dofs());
    for (auto _ : state) benchmark::DoNotOptimize(imp.solve(b));
}
BENCHMARK(BM_ImplicitSolve)->Args({640, 1})->Args({640, 2});

static void BM_ImexStep(benchmark::State& state) {
    const RunConfig c = default_config();
    const int degree = static_cast<int>(state.range(1));
    const auto ops = operators(static_cast<int>(state.range(0)), degree);
    drivers::DriverContext ctx{drivers::DriverKind::NonlinearMtmRisky, c.option, c.market, c.capital};
    const solver::LdgImexSystem sys(ops, ctx);
    const Eigen::VectorXd u = ldg::project_payoff(c.option, ops->space()).coeffs;
    for (auto _ : state) benchmark::DoNotOptimize(imex::step(degree + 1, sys, u, 0.1, 1.0 / 115));
}
BENCHMARK(BM_ImexStep)->Args({640, 1})->Args({640, 2});

static void BM_FullSolve(benchmark::State& state) {
    RunConfig c = default_config();
    c.cells = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(solver::solve(c));
}
BENCHMARK(BM_FullSolve)->Arg(160)->Arg(640)->Unit(benchmark::kMillisecond);

static void BM_CapitalTotal(benchmark::State& state) {
    const RunConfig c = default_config();
    double S = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(capital::capital_total(0.3, S, 2.0, c.option, c.market, c.capital));
        S = S > 59.0 ? 1.0 : S + 0.37;
    }
}
BENCHMARK(BM_CapitalTotal);

static void BM_BsValue(benchmark::State& state) {
    const RunConfig c = default_config();
    double S = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(analytic::bs_value(c.option, S, 0.3, c.market));
        S = S > 59.0 ? 1.0 : S + 0.37;
    }
}
BENCHMARK(BM_BsValue);

// One backward step of the stratified regression on a small grid.
static void BM_McBackwardStep(benchmark::State& state) {
    const RunConfig c = default_config();
    fbsde::RegressionGrid grid;
    grid.strata = 20;
    grid.pathsPerStratum = static_cast<int>(state.range(0));
    grid.timeSteps = 1;
    drivers::DriverContext ctx{drivers::DriverKind::NonlinearMtmRisky, c.option, c.market, c.capital};
    for (auto _ : state)
        benchmark::DoNotOptimize(fbsde::xva_mc(grid, ctx, {15.0}, 1, {.threads = 1}));
    state.SetItemsProcessed(state.iterations() * grid.strata * grid.pathsPerStratum);
}
BENCHMARK(BM_McBackwardStep)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
