#pragma once

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "xva/block_tridiagonal.hpp"
#include "xva/drivers.hpp"
#include "xva/market_config.hpp"

namespace xva::ldg {

/// Uniform mesh on [0, Smax]; cell j is (S_j, S_{j+1}].
struct Mesh {
    double smax = 0.0;
    int cells = 0;
    double h = 0.0;

    Mesh() = default;
    Mesh(double smax, int cells);

    double node(int j) const noexcept { return j * h; }
    /// Cell containing S under the half-open convention; S <= 0 maps to cell 0
    /// and S >= Smax to the last cell.
    int locate(double S) const noexcept;
};

/// Lagrange basis on the k+1 Gauss-Legendre nodes of [-1, 1].
class Basis {
public:
    explicit Basis(int degree);

    int degree() const noexcept { return degree_; }
    int size() const noexcept { return degree_ + 1; }
    const std::vector<double>& nodes() const noexcept { return nodes_; }
    const std::vector<double>& weights() const noexcept { return weights_; }

    double phi(int l, double xi) const;
    double dphi(int l, double xi) const;
    /// diff()(m, l) = phi_l'(xi_m).
    const Eigen::MatrixXd& diff() const noexcept { return diff_; }
    /// Values of every basis function at xi = -1 and xi = +1.
    const Eigen::VectorXd& left() const noexcept { return left_; }
    const Eigen::VectorXd& right() const noexcept { return right_; }

private:
    int degree_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
    Eigen::MatrixXd diff_;
    Eigen::VectorXd left_;
    Eigen::VectorXd right_;
};

/// Broken polynomial space E_h: mesh plus reference basis. Degrees of freedom
/// are nodal values ordered cell-major, index j * (k + 1) + i.
class Space {
public:
    Space(Mesh mesh, int degree) : mesh_(mesh), basis_(degree) {}

    const Mesh& mesh() const noexcept { return mesh_; }
    const Basis& basis() const noexcept { return basis_; }
    int dofs() const noexcept { return mesh_.cells * basis_.size(); }
    /// Physical location of quadrature node i in cell j.
    double point(int j, int i) const noexcept {
        return mesh_.node(j) + 0.5 * mesh_.h * (basis_.nodes()[i] + 1.0);
    }
    std::vector<double> points() const;

private:
    Mesh mesh_;
    Basis basis_;
};

using SpacePtr = std::shared_ptr<const Space>;

/// Piecewise polynomial function in nodal form.
struct DGField {
    SpacePtr space;
    Eigen::VectorXd coeffs;

    DGField() = default;
    DGField(SpacePtr s, Eigen::VectorXd c) : space(std::move(s)), coeffs(std::move(c)) {}

    double operator()(double S) const;
    /// In-cell derivative of the local polynomial at S.
    double derivative(double S) const;
    /// Trace at S_j^+ (from cell j) and at S_{j+1}^- (from cell j).
    double left_trace(int j) const;
    double right_trace(int j) const;
    double value(int j, int i) const { return coeffs[j * space->basis().size() + i]; }
};

/// A1: u-trace from the left, q-trace from the right, Dirichlet at S = 0 (calls).
/// A2: mirrored, Dirichlet at S = Smax (puts).
enum class FluxVariant { A1_CallBC, A2_PutBC };

FluxVariant variant_for(OptionKind kind);

/// Nodal interpolation of the payoff; throws if a strike alignment is required
/// and the strike is not a mesh node.
DGField project_payoff(const OptionSpec& option, SpacePtr space, bool requireStrikeNode = true);
DGField interpolate(const std::function<double(double)>& fn, SpacePtr space);
/// L2 projection with an over-integrating Gauss rule of `order` points per cell.
DGField l2_project(const std::function<double(double)>& fn, SpacePtr space, int order);

class ImplicitOperator;

/// The LDG forms C, H, D and K on one space with one flux variant.
///
/// Residual vectors returned by form_C/form_D/form_H are tested against each
/// nodal basis function (they live on the mass side); form_K returns q itself.
class LdgOperators {
public:
    LdgOperators(SpacePtr space, FluxVariant variant, drivers::ConservativeCoefficients coeffs);
    /// General diffusion a(S) and convection f(S, v) = speed * S * v.
    LdgOperators(SpacePtr space, FluxVariant variant, std::function<double(double)> diffusion,
                 double convectionSpeed);

    const SpacePtr& space() const noexcept { return space_; }
    FluxVariant variant() const noexcept { return variant_; }

    /// Diagonal of the mass matrix, (h/2) w_i per node.
    const Eigen::VectorXd& mass() const noexcept { return mass_; }

    /// q with <q, w>_j = K_j(u, w) for every w.
    Eigen::VectorXd form_K(const Eigen::VectorXd& u) const;
    Eigen::VectorXd form_D(const Eigen::VectorXd& q) const;
    Eigen::VectorXd form_C(const Eigen::VectorXd& u) const;
    /// Collocated source: entry (h/2) w_i H_i from nodal values of H.
    Eigen::VectorXd form_H(const Eigen::VectorXd& nodalSource) const;

    /// Lax-Friedrichs interface flux at node j from traces (uL, uR).
    double numerical_flux(int j, double uL, double uR) const;
    /// The dissipation bound alpha_j.
    double dissipation(int j) const;

    /// D(K(u)): the linear diffusion residual with q eliminated.
    Eigen::VectorXd diffusion(const Eigen::VectorXd& u) const { return form_D(form_K(u)); }

    /// Block-tridiagonal matrix of u -> D(K(u)), assembled at construction by
    /// probing the residual with three interleaved colourings of unit vectors.
    const BlockTridiagonal& diffusion_matrix() const;

    /// Factorized Mass - c * D o K.
    ImplicitOperator assemble_implicit(double c) const;

private:
    double trace_left(const Eigen::VectorXd& u, int j) const;
    double trace_right(const Eigen::VectorXd& u, int j) const;

    SpacePtr space_;
    FluxVariant variant_;
    double speed_;
    Eigen::VectorXd mass_;
    Eigen::VectorXd diffusionAtPoints_;
    std::vector<double> diffusionAtNodes_;
    BlockTridiagonal diffusionMatrix_;
};

class ImplicitOperator {
public:
    ImplicitOperator(double c, BlockTridiagonal matrix);

    double coefficient() const noexcept { return c_; }
    const BlockTridiagonal& matrix() const noexcept { return matrix_; }
    /// Solves (Mass - c D o K) x = rhs.
    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const { return lu_.solve(rhs); }

private:
    double c_;
    BlockTridiagonal matrix_;
    BlockTridiagonalLU lu_;
};

}  // namespace xva::ldg
