#pragma once

#include <Eigen/Dense>

#include "siglab/dec/form_field.hpp"
#include "siglab/dec/mass.hpp"
#include "siglab/metrics/metric_field.hpp"

namespace siglab::dec {

/// Sesquilinear pairing integral of alpha ^ conj(beta) over the torus,
/// degrees k and n-k; sum of top components weighted by h^n.
Complex wedge_integral(const PeriodicGrid& grid, const FormField& alpha,
                       const FormField& beta);

/// Phase c(n,k) with wedge_integral(alpha, tau beta) = c * <alpha,beta>_g:
/// the conjugate of the tau phase at degree k (for the plain star, c = 1).
Complex duality_phase(int n, int degree);

/// Pointwise multiplication of every component by a sampled scalar function.
FormField mult_operator(const PeriodicGrid& grid, const Eigen::VectorXd& f,
                        const FormField& omega);

/// [d, f] omega = d(f omega) - f d omega.  For the forward-difference
/// coboundary this equals (df) wedged onto axis-shifted components of omega,
/// so it stays a bounded zeroth-order operator.
FormField commutator(const PeriodicGrid& grid, const Eigen::VectorXd& f,
                     const FormField& omega);

struct CommutatorReport {
    double lhs_norm;        // ||[d,f] omega||_g
    double rhs_norm;        // B^{-1/2} max|grad_h f| ||omega||_g
    double ratio;           // lhs / rhs
    double allowance;       // eps_h = C * h, the documented first-order margin
    double measured_excess; // max(0, ratio - 1)
    double max_grad;        // max over sites of |forward gradient of f|
    bool pass;              // ratio <= 1 + eps_h
};

/// Discrete realization of the commutator norm bound with a first-order
/// allowance.  C defaults to 8; the allowance halves exactly under N -> 2N.
CommutatorReport commutator_bound_check(const PeriodicGrid& grid,
                                        const metrics::MetricField& metric,
                                        const Eigen::VectorXd& f, const FormField& omega,
                                        double allowance_constant = 8.0);

} // namespace siglab::dec
