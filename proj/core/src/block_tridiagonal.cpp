#include "xva/block_tridiagonal.hpp"

#include <cmath>

#include "xva/error.hpp"

namespace xva::ldg {

BlockTridiagonal::BlockTridiagonal(int blocks, int blockSize)
    : blocks_(blocks),
      blockSize_(blockSize),
      lower_(blocks, Eigen::MatrixXd::Zero(blockSize, blockSize)),
      diag_(blocks, Eigen::MatrixXd::Zero(blockSize, blockSize)),
      upper_(blocks, Eigen::MatrixXd::Zero(blockSize, blockSize)) {}

Eigen::VectorXd BlockTridiagonal::multiply(const Eigen::VectorXd& x) const {
    const int b = blockSize_;
    Eigen::VectorXd y = Eigen::VectorXd::Zero(rows());
    for (int i = 0; i < blocks_; ++i) {
        auto yi = y.segment(i * b, b);
        yi.noalias() += diag_[i] * x.segment(i * b, b);
        if (i > 0) yi.noalias() += lower_[i] * x.segment((i - 1) * b, b);
        if (i + 1 < blocks_) yi.noalias() += upper_[i] * x.segment((i + 1) * b, b);
    }
    return y;
}

Eigen::MatrixXd BlockTridiagonal::to_dense() const {
    const int b = blockSize_;
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(rows(), rows());
    for (int i = 0; i < blocks_; ++i) {
        dense.block(i * b, i * b, b, b) = diag_[i];
        if (i > 0) dense.block(i * b, (i - 1) * b, b, b) = lower_[i];
        if (i + 1 < blocks_) dense.block(i * b, (i + 1) * b, b, b) = upper_[i];
    }
    return dense;
}

BlockTridiagonal BlockTridiagonal::axpy(double scale, const BlockTridiagonal& other) const {
    BlockTridiagonal out = *this;
    for (int i = 0; i < blocks_; ++i) {
        out.lower_[i] += scale * other.lower_[i];
        out.diag_[i] += scale * other.diag_[i];
        out.upper_[i] += scale * other.upper_[i];
    }
    return out;
}

BlockTridiagonalLU::BlockTridiagonalLU(const BlockTridiagonal& a) : blockSize_(a.blockSize()) {
    const int n = a.blocks();
    multipliers_.resize(n);
    upper_.resize(n);
    pivots_.reserve(n);
    Eigen::MatrixXd schur = a.diag(0);
    for (int i = 0; i < n; ++i) {
        if (i > 0) {
            // L_i = A_{i,i-1} S_{i-1}^{-1}; blocks are (k+1) x (k+1)
            multipliers_[i] = a.lower(i) * pivots_[i - 1].inverse();
            schur = a.diag(i) - multipliers_[i] * a.upper(i - 1);
        }
        pivots_.emplace_back(schur);
        const double det = pivots_.back().determinant();
        if (!std::isfinite(det) || det == 0.0)
            throw Error("block tridiagonal factorization: singular pivot block");
        upper_[i] = a.upper(i);
    }
}

Eigen::VectorXd BlockTridiagonalLU::solve(const Eigen::VectorXd& rhs) const {
    const int n = static_cast<int>(pivots_.size());
    const int b = blockSize_;
    Eigen::VectorXd y = rhs;
    for (int i = 1; i < n; ++i)
        y.segment(i * b, b).noalias() -= multipliers_[i] * y.segment((i - 1) * b, b);
    Eigen::VectorXd x(rhs.size());
    for (int i = n - 1; i >= 0; --i) {
        Eigen::VectorXd r = y.segment(i * b, b);
        if (i + 1 < n) r.noalias() -= upper_[i] * x.segment((i + 1) * b, b);
        x.segment(i * b, b) = pivots_[i].solve(r);
    }
    return x;
}

}  // namespace xva::ldg
