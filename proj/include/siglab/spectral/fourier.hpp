#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <vector>

#include "siglab/dec/form_field.hpp"
#include "siglab/dec/grid.hpp"

namespace siglab::spectral {

using dec::Complex;

/// n-dimensional DFT on the lattice, one transform per form component.
/// Convention: to_modes is the unnormalized analysis sum
/// what(kappa) = sum_x w(x) exp(-2 pi i kappa.x / N); to_sites divides by N^n.
/// In this basis the forward-difference derivative along axis a multiplies by
/// D_a(kappa) = N (exp(2 pi i kappa_a / N) - 1).
class TorusFFT {
public:
    explicit TorusFFT(const dec::PeriodicGrid& grid);
    ~TorusFFT();
    TorusFFT(const TorusFFT&) = delete;
    TorusFFT& operator=(const TorusFFT&) = delete;

    /// Transform each component of a site-major cochain; result is mode-major
    /// with the same (mode, component) layout.
    Eigen::VectorXcd to_modes(const Eigen::VectorXcd& site_data, int comps) const;
    Eigen::VectorXcd to_sites(const Eigen::VectorXcd& mode_data, int comps) const;

private:
    const dec::PeriodicGrid* grid_;
    void* plan_fwd_;
    void* plan_bwd_;
    mutable std::vector<Complex> buf_;
};

/// Forward-difference symbol along one axis at integer frequency kappa_a.
Complex axis_symbol(int N, int kappa_a);

/// Symbol matrix of the coboundary at one frequency: C(n,k+1) x C(n,k).
Eigen::MatrixXcd coboundary_symbol(const dec::PeriodicGrid& grid, int degree,
                                   const std::array<int, 4>& kappa);

/// Scalar symbol of the flat Hodge Laplacian: sum_a |D_a(kappa)|^2
/// = sum_a (2N sin(pi kappa_a / N))^2.
double laplace_symbol(const dec::PeriodicGrid& grid, const std::array<int, 4>& kappa);

/// Frequency components folded into [-N/2, N/2).
std::array<int, 4> symmetrized(const dec::PeriodicGrid& grid, const std::array<int, 4>& kappa);

} // namespace siglab::spectral
