#include "dynoct/spectral.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/SVD>

#include "dynoct/errors.hpp"
#include "dynoct/svd.hpp"

namespace dynoct {

std::string to_string(KernelLabel label) {
    switch (label) {
        case KernelLabel::total: return "total";
        case KernelLabel::cc: return "cc";
        case KernelLabel::cm: return "cm";
        case KernelLabel::mc: return "mc";
        case KernelLabel::mm: return "mm";
    }
    return "?";
}

CorrelationKernel correlation_kernel(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double dt,
                                     KernelLabel label) {
    if (A.cols() != B.cols())
        throw std::invalid_argument("correlation_kernel: time sample counts differ");
    if (!(dt > 0.0)) throw std::invalid_argument("correlation_kernel: dt must be > 0");
    CorrelationKernel out;
    out.F = A * B.transpose() * dt;
    out.label = label;
    out.dt = dt;
    return out;
}

CorrelationKernel correlation_kernel(const Eigen::MatrixXd& A, double dt, KernelLabel label) {
    return correlation_kernel(A, A, dt, label);
}

double trace_dominance(const Eigen::MatrixXd& Ac, const Eigen::MatrixXd& Am) {
    if (Ac.rows() != Am.rows() || Ac.cols() != Am.cols())
        throw std::invalid_argument("trace_dominance: shapes differ");
    const double em = Am.squaredNorm();
    if (em == 0.0) throw DegenerateInputError("trace_dominance: metabolic energy is zero");
    return Ac.squaredNorm() / em;
}

CrossBoundReport cross_bound_check(const Eigen::MatrixXd& Ac, const Eigen::MatrixXd& Am,
                                   double dt) {
    if (Ac.cols() != Am.cols())
        throw std::invalid_argument("cross_bound_check: time sample counts differ");
    const Eigen::MatrixXd cross = Ac * Am.transpose() * dt;
    Eigen::BDCSVD<Eigen::MatrixXd> svd_cross(cross);
    Eigen::BDCSVD<Eigen::MatrixXd> svd_c(Ac);
    Eigen::BDCSVD<Eigen::MatrixXd> svd_m(Am);
    CrossBoundReport rep;
    rep.bound = svd_c.singularValues()[0] * svd_m.singularValues()[0] * dt;
    rep.max_sigma = svd_cross.singularValues()[0];
    rep.max_ratio = rep.bound > 0.0 ? rep.max_sigma / rep.bound : 0.0;
    rep.pass = rep.max_sigma <= rep.bound * (1.0 + 1e-10);
    return rep;
}

PerturbationReport perturbation_report(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Ac) {
    if (A.rows() != Ac.rows() || A.cols() != Ac.cols())
        throw std::invalid_argument("perturbation_report: shapes differ");
    const SvdResult svd_c = compute_svd(Ac);
    const double sigma_c = svd_c.sigma[0];
    if (sigma_c <= 0.0) throw std::invalid_argument("perturbation_report: Ac is zero");
    if (svd_c.rank_dim() > 1 && svd_c.sigma[1] > 1e-8 * sigma_c)
        throw std::invalid_argument("perturbation_report: Ac is not numerically rank one");

    PerturbationReport rep;
    Eigen::BDCSVD<Eigen::MatrixXd> svd_e(A - Ac);
    const double e_norm = svd_e.singularValues()[0];
    if (e_norm == 0.0) {
        rep.exact = true;
        rep.N = std::numeric_limits<double>::infinity();
        return rep;
    }
    rep.N = sigma_c / e_norm;

    const SvdResult svd_a = compute_svd(A);
    rep.sigma_rel_err = std::abs(sigma_c - svd_a.sigma[0]) / sigma_c;
    Eigen::VectorXd u1 = svd_a.U.col(0);
    if (svd_c.U.col(0).dot(u1) < 0.0) u1 = -u1;
    rep.vec_err = (svd_c.U.col(0) - u1).norm();
    rep.bound_constant = rep.N * std::max(rep.sigma_rel_err, rep.vec_err);
    return rep;
}

double nonorthogonality_check(const Eigen::MatrixXd& Ac, const Eigen::MatrixXd& Am) {
    if (Ac.cols() != Am.cols())
        throw std::invalid_argument("nonorthogonality_check: time sample counts differ");
    const SvdResult svd_c = compute_svd(Ac);
    const double sigma_c = svd_c.sigma[0];
    if (sigma_c <= 0.0) throw DegenerateInputError("nonorthogonality_check: zero collagen kernel");
    if (svd_c.rank_dim() > 1 && svd_c.sigma[1] > 1e-8 * sigma_c)
        throw std::invalid_argument("nonorthogonality_check: Ac is not numerically rank one");
    const Eigen::VectorXd phi_c = svd_c.U.col(0);
    Eigen::VectorXd phi_m = Am * svd_c.V.col(0); // left factor of F_mc = Am Ac^T dt
    const double norm_m = phi_m.norm();
    if (norm_m == 0.0)
        throw DegenerateInputError("nonorthogonality_check: zero metabolic factor");
    return std::abs(phi_c.dot(phi_m)) / norm_m;
}

} // namespace dynoct
