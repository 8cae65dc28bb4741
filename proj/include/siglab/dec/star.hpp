#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "siglab/dec/form_field.hpp"
#include "siglab/metrics/metric_field.hpp"

namespace siglab::dec {

/// Pointwise Hodge star on degree-k components at one site, in the coordinate
/// basis: built in a per-site g-orthonormal coframe from the Cholesky factor
/// of A(x), with *e^I = eps(I) e^{I^c} and ties in the multi-index ordering
/// broken lexicographically.  Real matrix of shape C(n,n-k) x C(n,k).
Eigen::MatrixXd star_block(const PeriodicGrid& grid, const Eigen::MatrixXd& A, int degree);

/// Degree-dependent involution phase: i^{p(p-1)+m} (n even), i^{p(p+1)+m+1}
/// (n odd); tau = phase * star satisfies tau(tau w) = w on every degree.
Complex tau_phase(int n, int degree);

FormField hodge_star(const PeriodicGrid& grid, const metrics::MetricField& metric,
                     const FormField& omega);
FormField tau(const PeriodicGrid& grid, const metrics::MetricField& metric,
              const FormField& omega);

/// Assembled complex block-diagonal tau on one degree (diagnostics and the
/// odd-parity literal operator).
Eigen::SparseMatrix<Complex> tau_matrix(const PeriodicGrid& grid,
                                        const metrics::MetricField& metric, int degree);

/// Optional fault injection for the verification suite: when enabled, one
/// sign in every star block is flipped so the tau^2 = id check must fail.
void set_star_perturbation(bool enabled);
bool star_perturbation();

} // namespace siglab::dec
