#include "dynoct/svd.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/SVD>

namespace dynoct {

SvdResult compute_svd(const Eigen::MatrixXd& A) {
    if (A.rows() < 1 || A.cols() < 1) throw std::invalid_argument("compute_svd: empty matrix");
    if (!A.allFinite()) throw std::invalid_argument("compute_svd: non-finite entries");

    Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SvdResult out;
    out.sigma = svd.singularValues();
    out.U = svd.matrixU();
    out.V = svd.matrixV();

    // Deterministic signs: largest-|entry| of each space-vector made positive.
    for (Eigen::Index i = 0; i < out.sigma.size(); ++i) {
        Eigen::Index arg = 0;
        double best = -1.0;
        for (Eigen::Index j = 0; j < out.U.rows(); ++j) {
            const double a = std::abs(out.U(j, i));
            if (a > best) {
                best = a;
                arg = j;
            }
        }
        if (out.U(arg, i) < 0.0) {
            out.U.col(i) = -out.U.col(i);
            out.V.col(i) = -out.V.col(i);
        }
    }
    return out;
}

SvdResult compute_svd(const CasoratiMatrix& A) { return compute_svd(A.data); }

} // namespace dynoct
