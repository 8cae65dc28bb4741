#pragma once

#include <vector>

#include "siglab/dec/form_field.hpp"
#include "siglab/spectral/fourier.hpp"

namespace siglab::spectral {

/// The flat-structure parametrix t = delta_0 (P_0 + Delta_0)^{-1} as a
/// Fourier multiplier: at frequency kappa != 0 the multiplier is
/// dhat_{k-1}(kappa)^H / lambda(kappa); at kappa = 0 it vanishes (the
/// harmonic projector's complement kills constant modes).  Always built from
/// the flat reference even when the ambient metric is rough.
class ParametrixOperator {
public:
    ParametrixOperator(const dec::PeriodicGrid& grid, int degree, double cutoff_K = 0.0);

    int degree() const { return degree_; }
    double cutoff() const { return K_; }

    /// t xi, degree k -> k-1.
    dec::FormField apply(const dec::FormField& xi) const;

    /// Fourier truncation t_K: keep modes with |kappa|_inf >= K.
    dec::FormField truncate(const dec::FormField& xi, double K) const;

    /// Spectral norm of the multiplier at one frequency (1/sqrt(lambda)).
    double multiplier_norm(const std::array<int, 4>& kappa) const;

private:
    const dec::PeriodicGrid* grid_;
    int degree_;
    double K_;
    TorusFFT fft_;
};

/// Relative defect || d t d w - d w || / || d w ||.  Throws if d w == 0
/// (identity undefined; callers report the case as skipped).
double parametrix_identity_check(const dec::PeriodicGrid& grid, const dec::FormField& omega);

struct TruncationTailReport {
    std::vector<double> K;
    std::vector<double> sup_proxy;    // {sum_{|k|>=K} (1+|k|)^{-N}}^{1/N}, decreasing
    std::vector<double> trace_proxy;  // sum_{0<|k|<K} (1+|k|)^{-1}, increasing
    double sup_slope = 0.0;           // log-log slope of sup_proxy vs K
    double expected_sup_slope = 0.0;  // n/N_lem - 1
};

/// Direct evaluation of the lemma's tail sums on the symmetrized frequency
/// lattice, for a grid of cutoffs; demonstrates the crossover used in the
/// interpolation estimate.
TruncationTailReport truncation_tail_report(const dec::PeriodicGrid& grid, double N_lem,
                                            const std::vector<double>& cutoffs);

} // namespace siglab::spectral
