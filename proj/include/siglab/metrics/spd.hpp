#pragma once

#include <Eigen/Dense>

namespace siglab::metrics {

/// Symmetric-eigendecomposition fractional power with eigenvalue floor 1e-14.
/// Inputs must be SPD; throws on non-SPD (eigenvalue below -1e-10 * scale).
Eigen::MatrixXd spd_pow(const Eigen::MatrixXd& A, double t);

Eigen::MatrixXd spd_sqrt(const Eigen::MatrixXd& A);
Eigen::MatrixXd spd_inv_sqrt(const Eigen::MatrixXd& A);

/// Ando-Kubo weighted geometric mean A0^{1/2} (A0^{-1/2} A1 A0^{-1/2})^t A0^{1/2}.
/// t in [0,1]; t = 0 and t = 1 return the endpoints verbatim.
Eigen::MatrixXd geometric_mean(const Eigen::MatrixXd& A0, const Eigen::MatrixXd& A1, double t);

/// k-th compound (exterior power) of M: entries det M[J, I] over increasing
/// multi-indices, lexicographic.  This is the induced map on Lambda^k.
Eigen::MatrixXd compound(const Eigen::MatrixXd& M, int k);

} // namespace siglab::metrics
