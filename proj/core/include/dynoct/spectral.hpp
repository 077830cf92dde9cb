#pragma once

#include <string>

#include <Eigen/Core>

namespace dynoct {

enum class KernelLabel { total, cc, cm, mc, mm };
std::string to_string(KernelLabel label);

/// Discretized time-integrated correlation kernel F = A * B^T * dt
/// (B = A for the diagonal components).
struct CorrelationKernel {
    Eigen::MatrixXd F;
    KernelLabel label = KernelLabel::total;
    double dt = 1.0;
};

CorrelationKernel correlation_kernel(const Eigen::MatrixXd& A, double dt,
                                     KernelLabel label = KernelLabel::total);
CorrelationKernel correlation_kernel(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double dt,
                                     KernelLabel label);

/// tr(F_cc) / tr(F_mm) = ||Ac||_F^2 / ||Am||_F^2 (dt cancels).
double trace_dominance(const Eigen::MatrixXd& Ac, const Eigen::MatrixXd& Am);

/// Every singular value of Ac * Am^T * dt against the Cauchy-Schwarz bound
/// sqrt(lambda(F_cc) * lambda_1(F_mm)) = sigma_1(Ac) * sigma_1(Am) * dt.
struct CrossBoundReport {
    double bound = 0.0;
    double max_sigma = 0.0;
    double max_ratio = 0.0; // 0 when the bound is 0 (zero factor)
    bool pass = false;      // max_sigma <= bound * (1 + 1e-10)
};
CrossBoundReport cross_bound_check(const Eigen::MatrixXd& Ac, const Eigen::MatrixXd& Am, double dt);

/// Dominance ratio and first singular value/vector perturbation of A against a
/// rank-one reference Ac (sigma2/sigma1 < 1e-8 required of Ac).
struct PerturbationReport {
    double N = 0.0;             // ||Ac||_op / ||A - Ac||_op; infinity flagged below
    bool exact = false;         // A == Ac (errors are 0, N has no finite value)
    double sigma_rel_err = 0.0; // |sigma_c - sigma_1| / sigma_c
    double vec_err = 0.0;       // ||u_c - u_1||_2 after sign alignment
    double bound_constant = 0.0; // smallest C with both errors <= C / N
};
PerturbationReport perturbation_report(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Ac);

/// |cos angle(phi_c, phi_m)| where phi_c is the leading eigenvector of F_cc
/// (= u_c) and phi_m is the leading left singular factor of F_mc (= Am * v_c,
/// normalized). Requires rank-one Ac and nonzero factors.
double nonorthogonality_check(const Eigen::MatrixXd& Ac, const Eigen::MatrixXd& Am);

} // namespace dynoct
