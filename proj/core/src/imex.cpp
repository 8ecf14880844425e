#include "xva/imex.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "xva/error.hpp"

namespace xva::imex {

ImexTableau ImexTableau::second_order() {
    ImexTableau t;
    t.order = 2;
    t.gamma = 1.0 - std::numbers::sqrt2 / 2.0;
    t.kappa = 1.0 - 1.0 / (2.0 * t.gamma);
    return t;
}

ImexTableau ImexTableau::third_order() {
    ImexTableau t;
    t.order = 3;
    const double g = 1767732205903.0 / 4055673282236.0;
    t.gamma = g;
    t.beta1 = -1.5 * g * g + 4.0 * g - 0.25;
    t.beta2 = 1.5 * g * g - 5.0 * g + 1.25;
    t.alpha1 = -0.35;
    t.alpha2 = (1.0 / 3.0 - 2.0 * g * g - 2.0 * t.beta2 * t.alpha1 * g) / (g * (1.0 - g));
    return t;
}

ImexTableau ImexTableau::for_order(int order) {
    if (order == 2) return second_order();
    if (order == 3) return third_order();
    throw Error("IMEX order must be 2 or 3", "order");
}

TimeGrid select_time_grid(const ldg::Mesh& mesh, int degree, const MarketParams& market,
                          double cflConstant, double maturity) {
    const double speed = std::abs(market.convection());
    int steps = 0;
    if (speed > 0.0) {
        const double dtMax = cflConstant * mesh.h / ((2 * degree + 1) * speed * mesh.smax);
        steps = static_cast<int>(std::floor(maturity / dtMax));
    } else {
        steps = std::max(4, mesh.cells / 10);
    }
    steps = std::max(steps, 1);
    return {steps, maturity / steps};
}

Eigen::VectorXd step_order2(const ImexSystem& sys, const Eigen::VectorXd& un, double tau,
                            double dt) {
    static const ImexTableau tab = ImexTableau::second_order();
    const double g = tab.gamma;
    const double c = dt * g;

    const Eigen::VectorXd Mun = sys.apply_mass(un);
    const Eigen::VectorXd E0 = sys.explicit_rhs(tau, un);

    const Eigen::VectorXd u1 = sys.solve_shifted(c, Mun + dt * g * E0);
    const Eigen::VectorXd L1 = sys.apply_implicit(u1);
    const Eigen::VectorXd E1 = sys.explicit_rhs(tau + g * dt, u1);

    const Eigen::VectorXd rhs =
        Mun + dt * ((1.0 - g) * L1 + tab.kappa * E0 + (1.0 - tab.kappa) * E1);
    return sys.solve_shifted(c, rhs);
}

Eigen::VectorXd step_order3(const ImexSystem& sys, const Eigen::VectorXd& un, double tau,
                            double dt) {
    static const ImexTableau tab = ImexTableau::third_order();
    const double g = tab.gamma;
    const double c = dt * g;

    const Eigen::VectorXd Mun = sys.apply_mass(un);
    const Eigen::VectorXd E0 = sys.explicit_rhs(tau, un);

    const Eigen::VectorXd u1 = sys.solve_shifted(c, Mun + dt * g * E0);
    const Eigen::VectorXd L1 = sys.apply_implicit(u1);
    const Eigen::VectorXd E1 = sys.explicit_rhs(tau + g * dt, u1);

    const Eigen::VectorXd u2 = sys.solve_shifted(
        c, Mun + dt * (0.5 * (1.0 - g) * L1 + (0.5 * (1.0 + g) - tab.alpha1) * E0 +
                       tab.alpha1 * E1));
    const Eigen::VectorXd L2 = sys.apply_implicit(u2);
    const Eigen::VectorXd E2 = sys.explicit_rhs(tau + 0.5 * (1.0 + g) * dt, u2);

    const Eigen::VectorXd u3 = sys.solve_shifted(
        c, Mun + dt * (tab.beta1 * L1 + tab.beta2 * L2 + (1.0 - tab.alpha2) * E1 +
                       tab.alpha2 * E2));
    const Eigen::VectorXd E3 = sys.explicit_rhs(tau + dt, u3);

    // The final combination shares its implicit part with stage 3, so
    // Mass u^{n+1} = Mass u3 + dt (explicit weights of the final row - stage 3 row).
    const Eigen::VectorXd correction = dt * ((tab.beta1 - (1.0 - tab.alpha2)) * E1 +
                                             (tab.beta2 - tab.alpha2) * E2 + g * E3);
    return u3 + sys.solve_shifted(0.0, correction);
}

Eigen::VectorXd step(int order, const ImexSystem& system, const Eigen::VectorXd& u, double tau,
                     double dt) {
    if (order == 2) return step_order2(system, u, tau, dt);
    if (order == 3) return step_order3(system, u, tau, dt);
    throw Error("IMEX order must be 2 or 3", "order");
}

}  // namespace xva::imex
