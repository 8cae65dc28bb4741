#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "siglab/dec/form_field.hpp"
#include "siglab/metrics/metric_field.hpp"

namespace siglab::dec {

/// The g-inner product on degree-k cochains: per-site SPD block
/// B(x) = lambda^k(A(x)^{-1}) sqrt(det A(x)) with cell weight h^n.
/// <w, e>_g = sum_x e(x)^H B(x) w(x) h^n (antilinear in the second slot).
class MassMatrix {
public:
    MassMatrix() = default;
    MassMatrix(const PeriodicGrid& grid, const metrics::MetricField& metric, int degree);

    int degree() const { return degree_; }
    const Eigen::MatrixXd& block(std::int64_t site) const { return blocks_[std::size_t(site)]; }
    /// Assembled block-diagonal matrix (includes the h^n weight).
    const Eigen::SparseMatrix<double>& matrix() const { return M_; }
    /// Block-diagonal inverse (includes 1/h^n).
    const Eigen::SparseMatrix<double>& inverse() const { return Minv_; }

    Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;
    Complex inner(const FormField& a, const FormField& b) const;
    double norm(const FormField& a) const;

private:
    int degree_ = -1;
    double hn_ = 1.0;
    std::vector<Eigen::MatrixXd> blocks_;
    Eigen::SparseMatrix<double> M_, Minv_;
};

/// Convenience constructor matching the spec operation name.
inline MassMatrix mass_matrix(const PeriodicGrid& grid, const metrics::MetricField& metric,
                              int degree) {
    return MassMatrix(grid, metric, degree);
}

} // namespace siglab::dec
