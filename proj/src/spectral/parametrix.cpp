#include "siglab/spectral/parametrix.hpp"

#include <cmath>
#include <stdexcept>

#include "siglab/dec/coboundary.hpp"

namespace siglab::spectral {

ParametrixOperator::ParametrixOperator(const dec::PeriodicGrid& grid, int degree,
                                       double cutoff_K)
    : grid_(&grid), degree_(degree), K_(cutoff_K), fft_(grid) {
    if (degree < 1 || degree > grid.n())
        throw std::invalid_argument("ParametrixOperator: degree must be in [1, n]");
}

dec::FormField ParametrixOperator::apply(const dec::FormField& xi) const {
    if (xi.degree != degree_)
        throw std::invalid_argument("ParametrixOperator: degree mismatch");
    const auto& grid = *grid_;
    const int ck = grid.comps(degree_);
    const int ckm = grid.comps(degree_ - 1);
    Eigen::VectorXcd modes = fft_.to_modes(xi.data, ck);
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(grid.dofs(degree_ - 1));
    for (std::int64_t s = 0; s < grid.sites(); ++s) {
        const auto kappa = grid.coords_of(s);
        const double lam = laplace_symbol(grid, kappa);
        if (lam == 0.0) continue;  // delta_0 image of the projector complement
        const Eigen::MatrixXcd dl = coboundary_symbol(grid, degree_ - 1, kappa);
        out.segment(s * ckm, ckm) = dl.adjoint() * modes.segment(s * ck, ck) / lam;
    }
    dec::FormField res(grid, degree_ - 1);
    res.data = fft_.to_sites(out, ckm);
    return res;
}

dec::FormField ParametrixOperator::truncate(const dec::FormField& xi, double K) const {
    const auto& grid = *grid_;
    const int ck = grid.comps(xi.degree);
    Eigen::VectorXcd modes = fft_.to_modes(xi.data, ck);
    for (std::int64_t s = 0; s < grid.sites(); ++s) {
        const auto kappa = symmetrized(grid, grid.coords_of(s));
        int kinf = 0;
        for (int a = 0; a < grid.n(); ++a) kinf = std::max(kinf, std::abs(kappa[a]));
        if (kinf < K)
            modes.segment(s * ck, ck).setZero();
    }
    dec::FormField res(grid, xi.degree);
    res.data = fft_.to_sites(modes, ck);
    return res;
}

double ParametrixOperator::multiplier_norm(const std::array<int, 4>& kappa) const {
    const double lam = laplace_symbol(*grid_, kappa);
    return lam > 0 ? 1.0 / std::sqrt(lam) : 0.0;
}

double parametrix_identity_check(const dec::PeriodicGrid& grid, const dec::FormField& omega) {
    dec::FormField dw = dec::coboundary(grid, omega);
    const double dnorm = dw.data.norm();
    if (dnorm == 0.0)
        throw std::invalid_argument("parametrix_identity_check: d omega = 0, check undefined");
    ParametrixOperator t(grid, omega.degree + 1);
    dec::FormField tdw = t.apply(dw);
    dec::FormField dtdw = dec::coboundary(grid, tdw);
    return (dtdw.data - dw.data).norm() / dnorm;
}

TruncationTailReport truncation_tail_report(const dec::PeriodicGrid& grid, double N_lem,
                                            const std::vector<double>& cutoffs) {
    TruncationTailReport rep;
    rep.expected_sup_slope = grid.n() / N_lem - 1.0;
    for (const double K : cutoffs) {
        double tail = 0, low = 0;
        for (std::int64_t s = 0; s < grid.sites(); ++s) {
            const auto kappa = symmetrized(grid, grid.coords_of(s));
            double k2 = 0;
            int kinf = 0;
            for (int a = 0; a < grid.n(); ++a) {
                k2 += double(kappa[a]) * kappa[a];
                kinf = std::max(kinf, std::abs(kappa[a]));
            }
            const double knorm = std::sqrt(k2);
            if (kinf >= K)
                tail += std::pow(1.0 + knorm, -N_lem);
            else if (kinf > 0)
                low += 1.0 / (1.0 + knorm);
        }
        rep.K.push_back(K);
        rep.sup_proxy.push_back(std::pow(tail, 1.0 / N_lem));
        rep.trace_proxy.push_back(low);
    }
    // log-log slope of the sup proxy over the supplied cutoffs
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (std::size_t i = 0; i < rep.K.size(); ++i) {
        if (rep.K[i] <= 0 || rep.sup_proxy[i] <= 0) continue;
        const double x = std::log(rep.K[i]), y = std::log(rep.sup_proxy[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++cnt;
    }
    if (cnt >= 2) rep.sup_slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    return rep;
}

} // namespace siglab::spectral
