#include "xva/ldg.hpp"

#include <algorithm>
#include <cmath>

#include "xva/error.hpp"
#include "xva/quadrature.hpp"

namespace xva::ldg {

Mesh::Mesh(double smax_, int cells_) : smax(smax_), cells(cells_), h(smax_ / cells_) {
    if (cells_ < 1 || !(smax_ > 0.0)) throw Error("mesh: need cells >= 1 and Smax > 0");
}

int Mesh::locate(double S) const noexcept {
    if (S <= 0.0) return 0;
    const int j = static_cast<int>(std::ceil(S / h)) - 1;
    return std::clamp(j, 0, cells - 1);
}

Basis::Basis(int degree) : degree_(degree) {
    if (degree < 0) throw Error("basis: negative degree");
    const auto rule = quad::gauss_legendre(degree + 1);
    nodes_ = rule.nodes;
    weights_ = rule.weights;
    const int n = size();
    diff_.resize(n, n);
    left_.resize(n);
    right_.resize(n);
    for (int l = 0; l < n; ++l) {
        for (int m = 0; m < n; ++m) diff_(m, l) = dphi(l, nodes_[m]);
        left_[l] = phi(l, -1.0);
        right_[l] = phi(l, 1.0);
    }
}

double Basis::phi(int l, double xi) const {
    double p = 1.0;
    for (int m = 0; m < size(); ++m)
        if (m != l) p *= (xi - nodes_[m]) / (nodes_[l] - nodes_[m]);
    return p;
}

double Basis::dphi(int l, double xi) const {
    double sum = 0.0;
    for (int s = 0; s < size(); ++s) {
        if (s == l) continue;
        double p = 1.0 / (nodes_[l] - nodes_[s]);
        for (int m = 0; m < size(); ++m)
            if (m != l && m != s) p *= (xi - nodes_[m]) / (nodes_[l] - nodes_[m]);
        sum += p;
    }
    return sum;
}

std::vector<double> Space::points() const {
    std::vector<double> out;
    out.reserve(dofs());
    for (int j = 0; j < mesh_.cells; ++j)
        for (int i = 0; i < basis_.size(); ++i) out.push_back(point(j, i));
    return out;
}

double DGField::operator()(double S) const {
    const auto& mesh = space->mesh();
    const auto& basis = space->basis();
    const int j = mesh.locate(S);
    const double xi = 2.0 * (S - mesh.node(j)) / mesh.h - 1.0;
    double v = 0.0;
    for (int l = 0; l < basis.size(); ++l) v += value(j, l) * basis.phi(l, xi);
    return v;
}

double DGField::derivative(double S) const {
    const auto& mesh = space->mesh();
    const auto& basis = space->basis();
    const int j = mesh.locate(S);
    const double xi = 2.0 * (S - mesh.node(j)) / mesh.h - 1.0;
    double d = 0.0;
    for (int l = 0; l < basis.size(); ++l) d += value(j, l) * basis.dphi(l, xi);
    return d * 2.0 / mesh.h;
}

double DGField::left_trace(int j) const {
    const auto& b = space->basis();
    return coeffs.segment(j * b.size(), b.size()).dot(b.left());
}

double DGField::right_trace(int j) const {
    const auto& b = space->basis();
    return coeffs.segment(j * b.size(), b.size()).dot(b.right());
}

FluxVariant variant_for(OptionKind kind) {
    return kind == OptionKind::Call ? FluxVariant::A1_CallBC : FluxVariant::A2_PutBC;
}

DGField interpolate(const std::function<double(double)>& fn, SpacePtr space) {
    Eigen::VectorXd c(space->dofs());
    const int n = space->basis().size();
    for (int j = 0; j < space->mesh().cells; ++j)
        for (int i = 0; i < n; ++i) c[j * n + i] = fn(space->point(j, i));
    return DGField(std::move(space), std::move(c));
}

DGField project_payoff(const OptionSpec& option, SpacePtr space, bool requireStrikeNode) {
    if (requireStrikeNode) {
        const double ratio = option.strike / space->mesh().h;
        if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio))
            throw Error("project_payoff: strike is not a mesh node", "cells");
    }
    return interpolate([&](double S) { return payoff(option, S); }, std::move(space));
}

DGField l2_project(const std::function<double(double)>& fn, SpacePtr space, int order) {
    const auto rule = quad::gauss_legendre(order);
    const auto& basis = space->basis();
    const auto& mesh = space->mesh();
    const int n = basis.size();
    Eigen::VectorXd c(space->dofs());
    for (int j = 0; j < mesh.cells; ++j) {
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t m = 0; m < rule.nodes.size(); ++m) {
                const double xi = rule.nodes[m];
                const double S = mesh.node(j) + 0.5 * mesh.h * (xi + 1.0);
                acc += rule.weights[m] * fn(S) * basis.phi(i, xi);
            }
            c[j * n + i] = acc / basis.weights()[i];  // orthogonal nodal basis
        }
    }
    return DGField(std::move(space), std::move(c));
}

LdgOperators::LdgOperators(SpacePtr space, FluxVariant variant,
                           drivers::ConservativeCoefficients coeffs)
    : LdgOperators(std::move(space), variant,
                   [coeffs](double S) { return coeffs.a(S); }, coeffs.convection) {}

LdgOperators::LdgOperators(SpacePtr space, FluxVariant variant,
                           std::function<double(double)> diffusion, double convectionSpeed)
    : space_(std::move(space)), variant_(variant), speed_(convectionSpeed) {
    const auto& mesh = space_->mesh();
    const auto& basis = space_->basis();
    const int n = basis.size();
    mass_.resize(space_->dofs());
    diffusionAtPoints_.resize(space_->dofs());
    for (int j = 0; j < mesh.cells; ++j)
        for (int i = 0; i < n; ++i) {
            mass_[j * n + i] = 0.5 * mesh.h * basis.weights()[i];
            diffusionAtPoints_[j * n + i] = diffusion(space_->point(j, i));
        }
    diffusionAtNodes_.resize(mesh.cells + 1);
    for (int j = 0; j <= mesh.cells; ++j) diffusionAtNodes_[j] = diffusion(mesh.node(j));

    // Probe D o K: unit vectors on cells of one residue class mod 3 never
    // share a neighbour, so one application recovers three block columns.
    const int N = mesh.cells;
    diffusionMatrix_ = BlockTridiagonal(N, n);
    for (int colour = 0; colour < 3; ++colour) {
        for (int l = 0; l < n; ++l) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(space_->dofs());
            for (int j = colour; j < N; j += 3) e[j * n + l] = 1.0;
            const Eigen::VectorXd y = this->diffusion(e);
            for (int row = 0; row < N; ++row) {
                for (int col = std::max(0, row - 1); col <= std::min(N - 1, row + 1); ++col) {
                    if (col % 3 != colour) continue;
                    auto& block = col == row       ? diffusionMatrix_.diag(row)
                                  : col == row - 1 ? diffusionMatrix_.lower(row)
                                                   : diffusionMatrix_.upper(row);
                    block.col(l) = y.segment(row * n, n);
                }
            }
        }
    }
}

double LdgOperators::trace_left(const Eigen::VectorXd& u, int j) const {
    const auto& b = space_->basis();
    return u.segment(j * b.size(), b.size()).dot(b.left());
}

double LdgOperators::trace_right(const Eigen::VectorXd& u, int j) const {
    const auto& b = space_->basis();
    return u.segment(j * b.size(), b.size()).dot(b.right());
}

Eigen::VectorXd LdgOperators::form_K(const Eigen::VectorXd& u) const {
    const auto& mesh = space_->mesh();
    const auto& basis = space_->basis();
    const int n = basis.size();
    const int N = mesh.cells;
    const auto& w = basis.weights();
    const auto& D = basis.diff();

    // Alternating u-trace at each mesh node 0..N.
    std::vector<double> uHat(N + 1);
    if (variant_ == FluxVariant::A1_CallBC) {
        uHat[0] = 0.0;
        for (int j = 1; j <= N; ++j) uHat[j] = trace_right(u, j - 1);
    } else {
        for (int j = 0; j < N; ++j) uHat[j] = trace_left(u, j);
        uHat[N] = 0.0;
    }

    Eigen::VectorXd q(u.size());
    for (int j = 0; j < N; ++j) {
        for (int i = 0; i < n; ++i) {
            double volume = 0.0;
            for (int m = 0; m < n; ++m) volume += w[m] * u[j * n + m] * D(m, i);
            const double rhs =
                -volume + uHat[j + 1] * basis.right()[i] - uHat[j] * basis.left()[i];
            q[j * n + i] = rhs / mass_[j * n + i];
        }
    }
    return q;
}

Eigen::VectorXd LdgOperators::form_D(const Eigen::VectorXd& q) const {
    const auto& mesh = space_->mesh();
    const auto& basis = space_->basis();
    const int n = basis.size();
    const int N = mesh.cells;
    const auto& w = basis.weights();
    const auto& D = basis.diff();

    // Alternating q-trace; the Neumann-like end takes the interior trace.
    std::vector<double> qHat(N + 1);
    if (variant_ == FluxVariant::A1_CallBC) {
        for (int j = 0; j < N; ++j) qHat[j] = trace_left(q, j);
        qHat[N] = trace_right(q, N - 1);
    } else {
        qHat[0] = trace_left(q, 0);
        for (int j = 1; j <= N; ++j) qHat[j] = trace_right(q, j - 1);
    }

    Eigen::VectorXd r(q.size());
    for (int j = 0; j < N; ++j) {
        const double gLeft = diffusionAtNodes_[j] * qHat[j];
        const double gRight = diffusionAtNodes_[j + 1] * qHat[j + 1];
        for (int i = 0; i < n; ++i) {
            double volume = 0.0;
            for (int m = 0; m < n; ++m)
                volume += w[m] * diffusionAtPoints_[j * n + m] * q[j * n + m] * D(m, i);
            r[j * n + i] = -volume + gRight * basis.right()[i] - gLeft * basis.left()[i];
        }
    }
    return r;
}

double LdgOperators::dissipation(int j) const {
    const auto& mesh = space_->mesh();
    return std::abs(speed_) * mesh.node(std::min(j + 1, mesh.cells));
}

double LdgOperators::numerical_flux(int j, double uL, double uR) const {
    const double S = space_->mesh().node(j);
    return 0.5 * (speed_ * S * uL + speed_ * S * uR - dissipation(j) * (uR - uL));
}

Eigen::VectorXd LdgOperators::form_C(const Eigen::VectorXd& u) const {
    const auto& mesh = space_->mesh();
    const auto& basis = space_->basis();
    const int n = basis.size();
    const int N = mesh.cells;
    const auto& w = basis.weights();
    const auto& D = basis.diff();

    std::vector<double> fHat(N + 1);
    fHat[0] = 0.0;  // f(0, u) = 0
    for (int j = 1; j < N; ++j) fHat[j] = numerical_flux(j, trace_right(u, j - 1), trace_left(u, j));
    fHat[N] = speed_ * mesh.node(N) * trace_right(u, N - 1);

    Eigen::VectorXd r(u.size());
    for (int j = 0; j < N; ++j) {
        for (int i = 0; i < n; ++i) {
            double volume = 0.0;
            for (int m = 0; m < n; ++m)
                volume += w[m] * speed_ * space_->point(j, m) * u[j * n + m] * D(m, i);
            r[j * n + i] = volume - fHat[j + 1] * basis.right()[i] + fHat[j] * basis.left()[i];
        }
    }
    return r;
}

Eigen::VectorXd LdgOperators::form_H(const Eigen::VectorXd& nodalSource) const {
    return mass_.cwiseProduct(nodalSource);
}

const BlockTridiagonal& LdgOperators::diffusion_matrix() const { return diffusionMatrix_; }

ImplicitOperator LdgOperators::assemble_implicit(double c) const {
    if (c < 0.0) throw Error("assemble_implicit: stage coefficient must be >= 0");
    BlockTridiagonal mass(space_->mesh().cells, space_->basis().size());
    const int n = space_->basis().size();
    for (int j = 0; j < space_->mesh().cells; ++j)
        mass.diag(j) = mass_.segment(j * n, n).asDiagonal();
    return ImplicitOperator(c, mass.axpy(-c, diffusionMatrix_));
}

ImplicitOperator::ImplicitOperator(double c, BlockTridiagonal matrix)
    : c_(c), matrix_(std::move(matrix)), lu_(matrix_) {}

}  // namespace xva::ldg
