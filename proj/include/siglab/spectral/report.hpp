#pragma once

#include <string>
#include <vector>

#include "siglab/metrics/exponents.hpp"
#include "siglab/spectral/eigensolve.hpp"

namespace siglab::spectral {

/// Singular-value report of the parity-dependent compact operator:
/// odd n:  D (1 + D^2)^{-1} on supp D, values mu/(1+mu^2) over the coexact
///         spectrum mu = sqrt(lambda);
/// even n: (1 + |D|)^{-1} off the kernel, values 1/(1+mu).
struct SpectralReport {
    int n = 0;
    int N = 0;
    std::string metric;
    double n_g = 0.0;
    std::vector<double> sv;        // nonincreasing
    std::vector<double> dee_mu;    // matching |D| eigenvalues (ascending)
    int kernel_dim = 0;
    double kernel_gap_ratio = 0.0;
    bool gap_ambiguous = false;
    bool solver_converged = true;
    std::string solver_notes;

    bool has_fit = false;
    double slope = 0.0;
    double slope_band = 0.0;       // 1.96 * OLS standard error
    double bound = 0.0;            // -1/n(g)
    bool decay_pass = false;

    std::string to_json() const;
    /// CSV columns: j, mu_j with 17 significant digits, LF line endings.
    std::string to_csv() const;
};

struct DecayFit {
    double slope = 0.0;
    double band = 0.0;
    int window_lo = 0;  // [lo, hi) indices into the value list
    int window_hi = 0;
};

/// Least-squares slope of log sv_j vs log j on the quantile window of j.
/// Kernel modes must already be excluded.  Throws if fewer than 50 values.
DecayFit decay_fit(const std::vector<double>& sv, double q_lo = 0.2, double q_hi = 0.7);

/// Report from an assembled operator: takes `count` leading singular values.
SpectralReport singular_values(const SignatureAssembly& assembly, int count,
                               const SolverOptions& opts = {},
                               const metrics::ExponentLedger* ledger = nullptr);

/// Report echoing an externally supplied singular-value list (synthetic
/// oracle mode; also used by tests).
SpectralReport report_from_values(std::vector<double> sv, double n_g);

/// Apply the fit and PASS rule (slope <= -1/n_g + 0.2) in place.
void attach_decay_fit(SpectralReport& rep, double q_lo = 0.2, double q_hi = 0.7);

} // namespace siglab::spectral
