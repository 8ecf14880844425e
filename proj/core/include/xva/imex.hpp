#pragma once

#include <Eigen/Dense>

#include "xva/ldg.hpp"
#include "xva/market_config.hpp"

namespace xva::imex {

/// Coefficients of the two IMEX Runge-Kutta pairs. Both share one implicit
/// diagonal gamma, so a single factorization of Mass - dt*gamma*L serves
/// every stage.
struct ImexTableau {
    int order = 2;
    double gamma = 0.0;
    double kappa = 0.0;  // order 2 only
    double beta1 = 0.0;  // order 3 only
    double beta2 = 0.0;
    double alpha1 = 0.0;
    double alpha2 = 0.0;

    /// L-stable two-stage DIRK(2,2,2) pair.
    static ImexTableau second_order();
    /// Third-order linearly implicit pair with gamma = 1767732205903/4055673282236.
    static ImexTableau third_order();
    static ImexTableau for_order(int order);
};

struct TimeGrid {
    int steps = 1;
    double dt = 0.0;
};

/// Step count from  dt* = C h / ((2k+1) |sigma^2 - beta| Smax),  L = max(1, floor(T / dt*)).
/// Without convection the step count falls back to max(4, N / 10).
TimeGrid select_time_grid(const ldg::Mesh& mesh, int degree, const MarketParams& market,
                          double cflConstant, double maturity);

/// Semi-discrete system  Mass du/dtau = L u + E(tau, u)  with L linear
/// (treated implicitly) and E explicit.
class ImexSystem {
public:
    virtual ~ImexSystem() = default;
    virtual Eigen::VectorXd apply_mass(const Eigen::VectorXd& u) const = 0;
    virtual Eigen::VectorXd apply_implicit(const Eigen::VectorXd& u) const = 0;
    virtual Eigen::VectorXd explicit_rhs(double tau, const Eigen::VectorXd& u) const = 0;
    /// Solves (Mass - c L) x = rhs.
    virtual Eigen::VectorXd solve_shifted(double c, const Eigen::VectorXd& rhs) const = 0;
};

Eigen::VectorXd step_order2(const ImexSystem& system, const Eigen::VectorXd& u, double tau,
                            double dt);
Eigen::VectorXd step_order3(const ImexSystem& system, const Eigen::VectorXd& u, double tau,
                            double dt);
/// Dispatches on the order (2 or 3).
Eigen::VectorXd step(int order, const ImexSystem& system, const Eigen::VectorXd& u, double tau,
                     double dt);

}  // namespace xva::imex
