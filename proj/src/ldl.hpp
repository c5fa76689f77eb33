#pragma once

// Sparse LDL' for quasi-definite KKT matrices with signed dynamic
// regularization: a pivot whose sign disagrees with the expected inertia, or
// that is too small, is replaced by sign * delta.

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCore>

#include <vector>

namespace symsage::detail {

class QuasiDefiniteLDL {
public:
    using SpMat = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
    using Vec = Eigen::VectorXd;

    /// K holds both triangles; signs[i] is +1 or -1, the expected sign of pivot i.
    void analyze(const SpMat& K, std::vector<int> signs);
    /// Numeric factorization with the pattern given to analyze().
    bool factor(const SpMat& K, double eps, double delta);
    /// Solves in place.
    void solve(Vec& b) const;

    int regularized_pivots() const { return regularized_; }

private:
    int n_ = 0;
    std::vector<int> perm_;   // perm_[k] = original index of pivot k
    std::vector<int> pinv_;
    std::vector<int> parent_;
    std::vector<int> lp_;
    std::vector<int> li_;
    std::vector<double> lx_;
    std::vector<double> d_;
    std::vector<int> signs_;  // in pivot order
    int regularized_ = 0;

    // Workspace.
    std::vector<int> lnz_;
    std::vector<int> flag_;
    std::vector<int> pattern_;
    std::vector<double> y_;
    mutable std::vector<double> work_;
};

}  // namespace symsage::detail
