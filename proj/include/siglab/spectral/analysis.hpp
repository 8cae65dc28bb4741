#pragma once

#include <vector>

#include "siglab/spectral/eigensolve.hpp"

namespace siglab::spectral {

struct KernelAnalysis {
    int dim = 0;
    int expected = 0;                    // C(n, m)
    double gap_ratio = 0.0;              // mu_ker / mu_{ker+1}
    bool ambiguous = false;
    /// rank(1 - P - Q) == dim, verified through the metric-independent
    /// cochain ranks: dofs(m) - rank d_m - rank d_{m-1}.
    bool finite_rank_check = false;
    int rank_based_dim = 0;
    std::vector<dec::FormField> basis;   // g-orthonormal harmonic forms
};

KernelAnalysis kernel_analysis(const SignatureAssembly& assembly,
                               const SolverOptions& opts = {});

/// Rank of the degree-k coboundary, computed exactly from the per-frequency
/// symbol blocks (the coboundary is translation invariant and metric-free).
std::int64_t coboundary_rank(const dec::PeriodicGrid& grid, int degree);

struct FredholmReport {
    bool even = false;
    /// || g F + F g ||_F / ||F||_F for the graded involution carried by the
    /// assembly (domain/target grading of H); zero by construction.
    double grading_anticommute_defect = 0.0;
    /// Measured pointwise-tau anticommutation defect on a band-limited probe
    /// (first-order diagnostic; O(1) at grid frequencies by design).
    double pointwise_tau_defect = 0.0;
    /// || F - F# ||_F / ||F||_F in the M geometry.
    double f_selfadjoint_defect = 0.0;
    /// max_i | sv_i(F^2 - 1) - (1 + lambda_i)^{-1} | over the middle block,
    /// both routes sorted (even parity; functional calculus vs pencil).
    double fsq_identity_max_err = 0.0;
    /// Operator norm estimate of [F, phi] in the M geometry.
    double commutator_norm = 0.0;
    std::vector<double> fsq_tail;        // singular values of F^2 - 1, desc
};

/// Builds the bounded module operator per parity (even: graded
/// F = H (1 + H^2)^{-1/2}; odd: from the M-symmetrized literal tau d) and
/// reports the grading/self-adjointness/identity checks and the commutator
/// norm with the sampled function phi.  Dense; intended for moderate N.
FredholmReport fredholm_module_check(const SignatureAssembly& assembly,
                                     const Eigen::VectorXd& phi);

/// Signature of the wedge pairing on the harmonic middle forms (n = 4 only).
/// Throws if n != 4 or the kernel dimension is not C(4,2) = 6.
int signature_pairing(const SignatureAssembly& assembly, const SolverOptions& opts = {});

} // namespace siglab::spectral
