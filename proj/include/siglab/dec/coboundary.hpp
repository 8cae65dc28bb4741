#pragma once

#include <Eigen/Sparse>

#include "siglab/dec/form_field.hpp"
#include "siglab/dec/grid.hpp"

namespace siglab::dec {

/// The coboundary d: degree k -> k+1 as a sparse real matrix.  Forward
/// differences with shuffle signs; satisfies d(k+1) * d(k) == 0 exactly.
Eigen::SparseMatrix<double> coboundary_matrix(const PeriodicGrid& grid, int degree);

/// d applied to a cochain.  Throws if degree == n.
FormField coboundary(const PeriodicGrid& grid, const FormField& omega);

/// Apply a real sparse operator to complex data (real and imaginary parts
/// separately; Eigen has no mixed-scalar product).
Eigen::VectorXcd apply_real(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXcd& x);

} // namespace siglab::dec
