#pragma once

#include <optional>
#include <string>
#include <vector>

#include "xva/drivers.hpp"
#include "xva/imex.hpp"
#include "xva/ldg.hpp"
#include "xva/market_config.hpp"

namespace xva::solver {

struct SolveOptions {
    /// Replaces the driver implied by the config's MTM convention.
    std::optional<drivers::DriverKind> driver;
    bool zeroCapital = false;
    /// Refactorizes the implicit operator every step instead of once per run.
    bool refactorizeEachStep = false;
};

struct RunMeta {
    int cells = 0;
    int degree = 0;
    int steps = 0;
    double dt = 0.0;
    double smax = 0.0;
    int schemeOrder = 0;
    ldg::FluxVariant variant = ldg::FluxVariant::A1_CallBC;
    drivers::DriverKind driver = drivers::DriverKind::NonlinearMtmRisky;
    double runtimeSeconds = 0.0;
};

/// Fields at t = 0 (tau = T) of one LDG-IMEX march.
struct SolveResult {
    ldg::DGField valueField;
    ldg::DGField qField;
    RunMeta meta;
    OptionSpec option;
    MarketParams market;

    double value(double S) const { return valueField(S); }
    double delta(double S) const { return qField(S); }
    double gamma(double S) const { return qField.derivative(S); }
    /// Risky minus risk-free value for price drivers; the solved field itself
    /// for the KVA drivers, whose unknown already is the adjustment.
    double xva(double S) const;
};

/// The LDG forms and the driver source assembled as an IMEX system.
class LdgImexSystem final : public imex::ImexSystem {
public:
    LdgImexSystem(std::shared_ptr<const ldg::LdgOperators> ops, drivers::DriverContext ctx,
                  bool refactorizeEachSolve = false);

    Eigen::VectorXd apply_mass(const Eigen::VectorXd& u) const override;
    Eigen::VectorXd apply_implicit(const Eigen::VectorXd& u) const override;
    Eigen::VectorXd explicit_rhs(double tau, const Eigen::VectorXd& u) const override;
    Eigen::VectorXd solve_shifted(double c, const Eigen::VectorXd& rhs) const override;

    /// Nodal values of H(tau, S_i, u_i).
    Eigen::VectorXd nodal_source(double tau, const Eigen::VectorXd& u) const;
    const ldg::LdgOperators& operators() const noexcept { return *ops_; }

private:
    std::shared_ptr<const ldg::LdgOperators> ops_;
    drivers::DriverContext ctx_;
    std::vector<double> points_;
    bool refactorize_;
    mutable std::optional<ldg::ImplicitOperator> implicit_;
};

/// Marches tau from 0 to T with the order-(k+1) scheme. Calls use flux
/// variant A1, puts A2. Throws xva::Error on a non-finite state (step, cell).
SolveResult solve(const RunConfig& config, const SolveOptions& options = {});

/// One sample row of the Greeks table.
struct GreekSample {
    double S = 0.0;
    double value = 0.0;
    double delta = 0.0;
    double gamma = 0.0;
    double xva = 0.0;
};

/// Samples at every cell midpoint and mesh node of the result's mesh.
std::vector<GreekSample> greeks(const SolveResult& result);
/// Samples at user-given spots.
std::vector<GreekSample> greeks(const SolveResult& result, const std::vector<double>& spots);

std::string to_string(drivers::DriverKind kind);

}  // namespace xva::solver
