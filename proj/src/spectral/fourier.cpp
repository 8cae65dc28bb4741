#include "siglab/spectral/fourier.hpp"

#include <fftw3.h>

#include <cmath>

namespace siglab::spectral {

TorusFFT::TorusFFT(const dec::PeriodicGrid& grid) : grid_(&grid) {
    buf_.resize(std::size_t(grid.sites()));
    int dims[4];
    for (int i = 0; i < grid.n(); ++i) dims[i] = grid.N();
    auto* io = reinterpret_cast<fftw_complex*>(buf_.data());
    plan_fwd_ = fftw_plan_dft(grid.n(), dims, io, io, FFTW_FORWARD, FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_dft(grid.n(), dims, io, io, FFTW_BACKWARD, FFTW_ESTIMATE);
}

TorusFFT::~TorusFFT() {
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

Eigen::VectorXcd TorusFFT::to_modes(const Eigen::VectorXcd& site_data, int comps) const {
    const std::int64_t ns = grid_->sites();
    Eigen::VectorXcd out(site_data.size());
    auto* io = reinterpret_cast<fftw_complex*>(buf_.data());
    for (int c = 0; c < comps; ++c) {
        for (std::int64_t s = 0; s < ns; ++s) buf_[std::size_t(s)] = site_data[s * comps + c];
        fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_), io, io);
        for (std::int64_t s = 0; s < ns; ++s) out[s * comps + c] = buf_[std::size_t(s)];
    }
    return out;
}

Eigen::VectorXcd TorusFFT::to_sites(const Eigen::VectorXcd& mode_data, int comps) const {
    const std::int64_t ns = grid_->sites();
    const double scale = 1.0 / double(ns);
    Eigen::VectorXcd out(mode_data.size());
    auto* io = reinterpret_cast<fftw_complex*>(buf_.data());
    for (int c = 0; c < comps; ++c) {
        for (std::int64_t s = 0; s < ns; ++s) buf_[std::size_t(s)] = mode_data[s * comps + c];
        fftw_execute_dft(static_cast<fftw_plan>(plan_bwd_), io, io);
        for (std::int64_t s = 0; s < ns; ++s) out[s * comps + c] = buf_[std::size_t(s)] * scale;
    }
    return out;
}

Complex axis_symbol(int N, int kappa_a) {
    const double th = 2.0 * M_PI * kappa_a / N;
    return double(N) * Complex(std::cos(th) - 1.0, std::sin(th));
}

Eigen::MatrixXcd coboundary_symbol(const dec::PeriodicGrid& grid, int degree,
                                   const std::array<int, 4>& kappa) {
    const int ck = grid.comps(degree);
    const int ck1 = grid.comps(degree + 1);
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(ck1, ck);
    for (int c = 0; c < ck; ++c)
        for (const auto& slot : grid.insertions(degree, c))
            d(slot.target, c) += double(slot.sign) * axis_symbol(grid.N(), kappa[slot.axis]);
    return d;
}

double laplace_symbol(const dec::PeriodicGrid& grid, const std::array<int, 4>& kappa) {
    double acc = 0;
    for (int a = 0; a < grid.n(); ++a) {
        const double s = 2.0 * grid.N() * std::sin(M_PI * kappa[a] / grid.N());
        acc += s * s;
    }
    return acc;
}

std::array<int, 4> symmetrized(const dec::PeriodicGrid& grid, const std::array<int, 4>& kappa) {
    std::array<int, 4> k = kappa;
    for (int a = 0; a < grid.n(); ++a)
        if (k[a] >= grid.N() / 2 + grid.N() % 2) k[a] -= grid.N();
    return k;
}

} // namespace siglab::spectral
