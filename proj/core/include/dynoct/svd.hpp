#pragma once

#include <Eigen/Core>

#include "dynoct/casorati.hpp"

namespace dynoct {

/// Thin SVD A = U * diag(sigma) * V^T with r = min(n_x, n_t) columns.
/// sigma is nonincreasing; U, V have orthonormal columns. Sign convention:
/// each u_i's largest-magnitude entry is positive (v_i flipped in tandem).
struct SvdResult {
    Eigen::VectorXd sigma; // length r
    Eigen::MatrixXd U;     // n_x by r, space-vectors
    Eigen::MatrixXd V;     // n_t by r, time-vectors

    int rank_dim() const { return static_cast<int>(sigma.size()); }
};

SvdResult compute_svd(const Eigen::MatrixXd& A);
SvdResult compute_svd(const CasoratiMatrix& A);

} // namespace dynoct
