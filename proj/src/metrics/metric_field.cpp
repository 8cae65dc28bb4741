#include "siglab/metrics/metric_field.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "siglab/common/rng.hpp"
#include "siglab/metrics/spd.hpp"

namespace siglab::metrics {

namespace {

double torus_dist(const std::array<double, 4>& a, const std::array<double, 4>& b, int n) {
    double d2 = 0;
    for (int i = 0; i < n; ++i) {
        double di = std::fabs(a[i] - b[i]);
        di = std::min(di, 1.0 - di);
        d2 += di * di;
    }
    return std::sqrt(d2);
}

} // namespace

MetricField::MetricField(const dec::PeriodicGrid& grid, std::vector<Eigen::MatrixXd> blocks,
                         double lower_bound, double p_int, bool flat, std::string descriptor)
    : grid_(&grid), A_(std::move(blocks)), B_(lower_bound), p_int_(p_int), flat_(flat),
      desc_(std::move(descriptor)) {
    if (std::int64_t(A_.size()) != grid.sites())
        throw std::invalid_argument("MetricField: one block per site required");
    if (B_ < 1.0)
        throw std::invalid_argument("MetricField: lower bound must be >= 1");
    const int n = grid.n();
    for (std::size_t s = 0; s < A_.size(); ++s) {
        const Eigen::MatrixXd& A = A_[s];
        if (A.rows() != n || A.cols() != n)
            throw std::invalid_argument("MetricField: block dimension mismatch");
        if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, A.cwiseAbs().maxCoeff()))
            throw std::invalid_argument("MetricField: non-symmetric sample block");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < B_ - 1e-9 * std::max(1.0, B_)) {
            std::ostringstream msg;
            msg << "MetricField: sample block at site " << s << " violates A >= " << B_
                << " * Id (min eigenvalue " << es.eigenvalues().minCoeff() << ")";
            throw std::invalid_argument(msg.str());
        }
    }
}

double MetricField::empirical_lp_norm(double p) const {
    const double hn = std::pow(grid_->h(), grid_->n());
    double acc = 0;
    for (const auto& A : A_) {
        const double nrm = A.operatorNorm();  // spectral norm, symmetric input
        acc += std::pow(nrm, p) * hn;
    }
    return std::pow(acc, 1.0 / p);
}

MetricField flat_metric(const dec::PeriodicGrid& grid) {
    std::vector<Eigen::MatrixXd> blocks(std::size_t(grid.sites()),
                                        Eigen::MatrixXd::Identity(grid.n(), grid.n()));
    return MetricField(grid, std::move(blocks), 1.0, 2.0, true, "flat");
}

MetricField conformal_singular_metric(const dec::PeriodicGrid& grid,
                                      const std::array<double, 4>& center, double beta,
                                      double floor_B, double p_int) {
    const int n = grid.n();
    if (beta < 0.0)
        throw std::invalid_argument("conformal_singular_metric: beta must be >= 0");
    if (p_int <= 0.0)
        p_int = beta > 0 ? n / beta - 0.5 : 1e12;  // documented safety margin
    if (beta > 0 && beta * p_int >= n) {
        std::ostringstream msg;
        msg << "conformal_singular_metric: beta * p_int = " << beta * p_int
            << " >= n = " << n << " (profile not in L^p)";
        throw std::invalid_argument(msg.str());
    }
    if (floor_B < 1.0)
        throw std::invalid_argument("conformal_singular_metric: floor must be >= 1");

    std::vector<Eigen::MatrixXd> blocks;
    blocks.reserve(std::size_t(grid.sites()));
    const double rmin = grid.h() / 2.0;  // clamp at the h/2 profile value
    for (std::int64_t s = 0; s < grid.sites(); ++s) {
        const double r = std::max(torus_dist(grid.position(s), center, n), rmin);
        const double phi = beta > 0 ? std::pow(r, -beta) : 1.0;
        blocks.push_back(std::max(floor_B, phi) * Eigen::MatrixXd::Identity(n, n));
    }
    std::ostringstream desc;
    desc << "conformal(beta=" << beta << ",B=" << floor_B << ",p_int=" << p_int << ")";
    return MetricField(grid, std::move(blocks), floor_B, p_int, false, desc.str());
}

MetricField metric_from_transitions(const dec::PeriodicGrid& grid, const TransitionData& t) {
    const int n = grid.n();
    std::vector<Eigen::MatrixXd> blocks(std::size_t(grid.sites()),
                                        Eigen::MatrixXd::Identity(n, n));
    for (const auto& f : t.fields) {
        if (std::int64_t(f.psi.size()) != grid.sites())
            throw std::invalid_argument("metric_from_transitions: field size mismatch");
        for (std::int64_t s = 0; s < grid.sites(); ++s) {
            if (!f.support.empty() && !f.support[std::size_t(s)]) continue;
            const Eigen::MatrixXd& psi = f.psi[std::size_t(s)];
            if (!psi.allFinite())
                throw std::invalid_argument("metric_from_transitions: non-finite entry");
            blocks[std::size_t(s)] += psi.transpose() * psi;
        }
    }
    return MetricField(grid, std::move(blocks), 1.0, 2.0, false, "transitions");
}

MetricField random_rough_metric(const dec::PeriodicGrid& grid, double p_int,
                                std::uint64_t seed) {
    const int n = grid.n();
    if (p_int <= 1.0)
        throw std::invalid_argument("random_rough_metric: p_int must be > 1");

    // Singular center and smooth low-order trig data, all derived from the seed.
    // The center snaps to the quarter lattice so the h/2 clamp behaves the
    // same way at every admissible resolution (keeps the empirical L^p sums
    // comparable across refinements).
    SplitMix64 master(hash_combine(seed, 0x726f756768ull));
    std::array<double, 4> x0{0, 0, 0, 0};
    for (int i = 0; i < n; ++i) x0[i] = std::floor(master.uniform() * 4.0) / 4.0;
    Eigen::VectorXd u(n);
    for (int i = 0; i < n; ++i) u[i] = master.symmetric();
    u.normalize();
    // Trig coefficients of the smooth ripple s(x) and of a small matrix field G.
    std::array<std::array<double, 4>, 4> phase{};
    Eigen::MatrixXd Gcoef(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) Gcoef(i, j) = 0.3 * master.symmetric();
        for (int j = 0; j < 4; ++j) phase[i][j] = master.uniform();
    }

    // Exponent 0.9 * n / p_int with amplitude 2: the L^{p_int} sum converges
    // (0.9 n < n) while every L^q sample sum with q > n / beta = p_int / 0.9
    // diverges under refinement, at rate N^{0.8 n} for q = 2 p_int.
    const double beta = 0.9 * n / p_int;
    const double amp = 2.0;
    const double rmin = grid.h() / 2.0;
    const double B = kDefaultFloor;

    std::vector<Eigen::MatrixXd> blocks;
    blocks.reserve(std::size_t(grid.sites()));
    for (std::int64_t s = 0; s < grid.sites(); ++s) {
        const auto x = grid.position(s);
        const double r = std::max(torus_dist(x, x0, n), rmin);
        double ripple = 0;
        for (int i = 0; i < n; ++i)
            ripple += std::cos(2 * M_PI * (x[i] + phase[i][0])) / n;
        const double phi = amp * std::pow(r, -beta) * (1.0 + 0.3 * ripple);
        Eigen::MatrixXd G(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                G(i, j) = Gcoef(i, j) * std::sin(2 * M_PI * (x[j] + phase[j][1]));
        Eigen::MatrixXd A = B * Eigen::MatrixXd::Identity(n, n) + phi * (u * u.transpose()) +
                            G.transpose() * G;
        blocks.push_back(0.5 * (A + A.transpose()));
    }
    std::ostringstream desc;
    desc << "random(p_int=" << p_int << ",seed=" << seed << ")";
    return MetricField(grid, std::move(blocks), B, p_int, false, desc.str());
}

MetricField interpolate_metrics(const MetricField& g0, const MetricField& g1, double t) {
    if (&g0.grid() != &g1.grid() &&
        (g0.grid().n() != g1.grid().n() || g0.grid().N() != g1.grid().N()))
        throw std::invalid_argument("interpolate_metrics: metrics live on different grids");
    if (t == 0.0) return g0;
    if (t == 1.0) return g1;
    const dec::PeriodicGrid& grid = g0.grid();
    std::vector<Eigen::MatrixXd> blocks;
    blocks.reserve(std::size_t(grid.sites()));
    for (std::int64_t s = 0; s < grid.sites(); ++s)
        blocks.push_back(geometric_mean(g0.at(s), g1.at(s), t));
    const double B = std::pow(g0.lower_bound(), 1.0 - t) * std::pow(g1.lower_bound(), t);
    const double p = 1.0 / ((1.0 - t) / g0.p_int() + t / g1.p_int());
    std::ostringstream desc;
    desc << "mean(t=" << t << ";" << g0.descriptor() << ";" << g1.descriptor() << ")";
    return MetricField(grid, std::move(blocks), B, p, g0.is_flat() && g1.is_flat(), desc.str());
}

} // namespace siglab::metrics
