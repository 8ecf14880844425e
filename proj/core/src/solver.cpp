#include "xva/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "xva/analytic_bs.hpp"
#include "xva/error.hpp"

namespace xva::solver {

double SolveResult::xva(double S) const {
    if (!drivers::has_payoff_terminal(meta.driver)) return value(S);
    return value(S) - analytic::bs_value(option, S, 0.0, market);
}

LdgImexSystem::LdgImexSystem(std::shared_ptr<const ldg::LdgOperators> ops,
                             drivers::DriverContext ctx, bool refactorizeEachSolve)
    : ops_(std::move(ops)),
      ctx_(std::move(ctx)),
      points_(ops_->space()->points()),
      refactorize_(refactorizeEachSolve) {}

Eigen::VectorXd LdgImexSystem::apply_mass(const Eigen::VectorXd& u) const {
    return ops_->mass().cwiseProduct(u);
}

Eigen::VectorXd LdgImexSystem::apply_implicit(const Eigen::VectorXd& u) const {
    return ops_->diffusion_matrix().multiply(u);
}

Eigen::VectorXd LdgImexSystem::nodal_source(double tau, const Eigen::VectorXd& u) const {
    Eigen::VectorXd h(u.size());
    const double t = ctx_.option.maturity - tau;
    const bool needsV = drivers::needs_risk_free_value(ctx_.kind);
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        const double S = points_[i];
        std::optional<double> V;
        if (needsV) V = analytic::bs_value(ctx_.option, S, t, ctx_.market);
        h[i] = drivers::source_H(ctx_, tau, S, u[i], V);
    }
    return h;
}

Eigen::VectorXd LdgImexSystem::explicit_rhs(double tau, const Eigen::VectorXd& u) const {
    return ops_->form_C(u) + ops_->form_H(nodal_source(tau, u));
}

Eigen::VectorXd LdgImexSystem::solve_shifted(double c, const Eigen::VectorXd& rhs) const {
    if (c == 0.0) return rhs.cwiseQuotient(ops_->mass());
    if (refactorize_ || !implicit_ || implicit_->coefficient() != c)
        implicit_.emplace(ops_->assemble_implicit(c));
    return implicit_->solve(rhs);
}

namespace {

void check_finite(const Eigen::VectorXd& u, int step, int blockSize) {
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        if (!std::isfinite(u[i])) {
            std::ostringstream os;
            os << "solver produced a non-finite value at step " << step << ", cell "
               << i / blockSize << " (node " << i % blockSize << ")";
            throw Error(os.str());
        }
    }
}

}  // namespace

SolveResult solve(const RunConfig& config, const SolveOptions& options) {
    validate(config);
    const auto start = std::chrono::steady_clock::now();

    auto space = std::make_shared<const ldg::Space>(ldg::Mesh(config.smax(), config.cells),
                                                    config.polyDegree);
    const auto variant = ldg::variant_for(config.option.kind);
    auto ops = std::make_shared<const ldg::LdgOperators>(
        space, variant, drivers::ConservativeCoefficients::from(config.market));

    drivers::DriverContext ctx;
    ctx.kind = options.driver.value_or(drivers::driver_for(config.mtmConvention));
    ctx.option = config.option;
    ctx.market = config.market;
    ctx.capital = config.capital;
    ctx.zeroCapital = options.zeroCapital;

    imex::TimeGrid grid = imex::select_time_grid(space->mesh(), config.polyDegree, config.market,
                                                 config.cflConstant, config.option.maturity);
    if (config.timeSteps > 0) grid = {config.timeSteps, config.option.maturity / config.timeSteps};

    Eigen::VectorXd u = drivers::has_payoff_terminal(ctx.kind)
                            ? ldg::project_payoff(config.option, space, config.requireStrikeNode)
                                  .coeffs
                            : Eigen::VectorXd::Zero(space->dofs());

    const int order = config.polyDegree + 1;
    LdgImexSystem system(ops, ctx, options.refactorizeEachStep);
    const int blockSize = space->basis().size();
    for (int n = 0; n < grid.steps; ++n) {
        u = imex::step(order, system, u, n * grid.dt, grid.dt);
        check_finite(u, n + 1, blockSize);
    }

    SolveResult result;
    result.valueField = ldg::DGField(space, u);
    result.qField = ldg::DGField(space, ops->form_K(u));
    result.option = config.option;
    result.market = config.market;
    result.meta.cells = config.cells;
    result.meta.degree = config.polyDegree;
    result.meta.steps = grid.steps;
    result.meta.dt = grid.dt;
    result.meta.smax = config.smax();
    result.meta.schemeOrder = order;
    result.meta.variant = variant;
    result.meta.driver = ctx.kind;
    result.meta.runtimeSeconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

std::vector<GreekSample> greeks(const SolveResult& result, const std::vector<double>& spots) {
    std::vector<GreekSample> out;
    out.reserve(spots.size());
    for (double S : spots)
        out.push_back({S, result.value(S), result.delta(S), result.gamma(S), result.xva(S)});
    return out;
}

std::vector<GreekSample> greeks(const SolveResult& result) {
    const auto& mesh = result.valueField.space->mesh();
    std::vector<double> spots;
    spots.reserve(2 * mesh.cells + 1);
    for (int j = 0; j < mesh.cells; ++j) {
        spots.push_back(mesh.node(j));
        spots.push_back(mesh.node(j) + 0.5 * mesh.h);
    }
    spots.push_back(mesh.node(mesh.cells));
    return greeks(result, spots);
}

std::string to_string(drivers::DriverKind kind) {
    using drivers::DriverKind;
    switch (kind) {
        case DriverKind::LinearMtmRiskFree: return "linear";
        case DriverKind::NonlinearMtmRisky: return "nonlinear";
        case DriverKind::GarciaKVA: return "garcia";
        case DriverKind::CapitalCostKVA: return "capital-cost-kva";
        case DriverKind::RiskFreeDiscount: return "risk-free";
    }
    return "unknown";
}

}  // namespace xva::solver
