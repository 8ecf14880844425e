#pragma once

#include <vector>

#include <Eigen/Dense>

namespace xva::ldg {

/// Square block-tridiagonal matrix with equal dense blocks. Row i couples
/// block columns i-1 (lower), i (diag) and i+1 (upper).
class BlockTridiagonal {
public:
    BlockTridiagonal() = default;
    BlockTridiagonal(int blocks, int blockSize);

    int blocks() const noexcept { return blocks_; }
    int blockSize() const noexcept { return blockSize_; }
    int rows() const noexcept { return blocks_ * blockSize_; }

    Eigen::MatrixXd& lower(int i) { return lower_[i]; }
    Eigen::MatrixXd& diag(int i) { return diag_[i]; }
    Eigen::MatrixXd& upper(int i) { return upper_[i]; }
    const Eigen::MatrixXd& lower(int i) const { return lower_[i]; }
    const Eigen::MatrixXd& diag(int i) const { return diag_[i]; }
    const Eigen::MatrixXd& upper(int i) const { return upper_[i]; }

    Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd to_dense() const;

    /// this + scale * other, block by block.
    BlockTridiagonal axpy(double scale, const BlockTridiagonal& other) const;

private:
    int blocks_ = 0;
    int blockSize_ = 0;
    std::vector<Eigen::MatrixXd> lower_;
    std::vector<Eigen::MatrixXd> diag_;
    std::vector<Eigen::MatrixXd> upper_;
};

/// Block LU (block Thomas) factorization with partial pivoting inside the
/// diagonal Schur complements. Throws xva::Error on a singular pivot block.
class BlockTridiagonalLU {
public:
    BlockTridiagonalLU() = default;
    explicit BlockTridiagonalLU(const BlockTridiagonal& matrix);

    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
    bool empty() const noexcept { return pivots_.empty(); }

private:
    int blockSize_ = 0;
    std::vector<Eigen::MatrixXd> multipliers_;  // L_i = A_{i,i-1} S_{i-1}^{-1}
    std::vector<Eigen::MatrixXd> upper_;
    std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> pivots_;
};

}  // namespace xva::ldg
