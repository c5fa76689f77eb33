#include "ldl.hpp"

#include <cmath>
#include <stdexcept>

namespace symsage::detail {

void QuasiDefiniteLDL::analyze(const SpMat& K, std::vector<int> signs)
{
    n_ = static_cast<int>(K.rows());
    if (K.cols() != n_ || static_cast<int>(signs.size()) != n_) {
        throw std::invalid_argument("KKT matrix and sign vector disagree in size");
    }
    Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> P;
    Eigen::AMDOrdering<int> amd;
    amd(K, P);
    // The ordering lists, for each pivot position, the original index.
    perm_.assign(P.indices().data(), P.indices().data() + n_);
    pinv_.assign(n_, 0);
    for (int k = 0; k < n_; ++k) {
        pinv_[perm_[k]] = k;
    }
    signs_.assign(n_, 1);
    for (int k = 0; k < n_; ++k) {
        signs_[k] = signs[perm_[k]] >= 0 ? 1 : -1;
    }

    // Elimination tree and column counts of L.
    parent_.assign(n_, -1);
    lnz_.assign(n_, 0);
    flag_.assign(n_, -1);
    for (int k = 0; k < n_; ++k) {
        flag_[k] = k;
        const int kk = perm_[k];
        for (SpMat::InnerIterator it(K, kk); it; ++it) {
            int i = pinv_[it.row()];
            if (i >= k) {
                continue;
            }
            for (; flag_[i] != k; i = parent_[i]) {
                if (parent_[i] == -1) {
                    parent_[i] = k;
                }
                ++lnz_[i];
                flag_[i] = k;
            }
        }
    }
    lp_.assign(n_ + 1, 0);
    for (int k = 0; k < n_; ++k) {
        lp_[k + 1] = lp_[k] + lnz_[k];
    }
    li_.assign(lp_[n_], 0);
    lx_.assign(lp_[n_], 0.0);
    d_.assign(n_, 0.0);
    pattern_.assign(n_, 0);
    y_.assign(n_, 0.0);
    work_.assign(n_, 0.0);
}

bool QuasiDefiniteLDL::factor(const SpMat& K, double eps, double delta)
{
    regularized_ = 0;
    for (int k = 0; k < n_; ++k) {
        y_[k] = 0.0;
        int top = n_;
        flag_[k] = k;
        lnz_[k] = 0;
        const int kk = perm_[k];
        for (SpMat::InnerIterator it(K, kk); it; ++it) {
            int i = pinv_[it.row()];
            if (i > k) {
                continue;
            }
            y_[i] += it.value();
            int len = 0;
            for (; flag_[i] != k; i = parent_[i]) {
                pattern_[len++] = i;
                flag_[i] = k;
            }
            while (len > 0) {
                pattern_[--top] = pattern_[--len];
            }
        }
        double dk = y_[k];
        y_[k] = 0.0;
        for (; top < n_; ++top) {
            const int i = pattern_[top];
            const double yi = y_[i];
            y_[i] = 0.0;
            const int p2 = lp_[i] + lnz_[i];
            for (int p = lp_[i]; p < p2; ++p) {
                y_[li_[p]] -= lx_[p] * yi;
            }
            const double lki = yi / d_[i];
            dk -= lki * yi;
            li_[p2] = k;
            lx_[p2] = lki;
            ++lnz_[i];
        }
        if (!std::isfinite(dk)) {
            return false;
        }
        if (dk * signs_[k] <= eps) {
            dk = signs_[k] * delta;
            ++regularized_;
        }
        d_[k] = dk;
    }
    return true;
}

void QuasiDefiniteLDL::solve(Vec& b) const
{
    for (int k = 0; k < n_; ++k) {
        work_[k] = b[perm_[k]];
    }
    for (int j = 0; j < n_; ++j) {
        const double wj = work_[j];
        for (int p = lp_[j]; p < lp_[j + 1]; ++p) {
            work_[li_[p]] -= lx_[p] * wj;
        }
    }
    for (int j = 0; j < n_; ++j) {
        work_[j] /= d_[j];
    }
    for (int j = n_ - 1; j >= 0; --j) {
        double wj = work_[j];
        for (int p = lp_[j]; p < lp_[j + 1]; ++p) {
            wj -= lx_[p] * work_[li_[p]];
        }
        work_[j] = wj;
    }
    for (int k = 0; k < n_; ++k) {
        b[perm_[k]] = work_[k];
    }
}

}  // namespace symsage::detail
