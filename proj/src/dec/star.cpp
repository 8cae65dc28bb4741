#include "siglab/dec/star.hpp"

#include <stdexcept>

#include "siglab/metrics/spd.hpp"

namespace siglab::dec {

namespace {
bool g_perturb_star = false;
}

void set_star_perturbation(bool enabled) { g_perturb_star = enabled; }
bool star_perturbation() { return g_perturb_star; }

Eigen::MatrixXd star_block(const PeriodicGrid& grid, const Eigen::MatrixXd& A, int degree) {
    const int n = grid.n();
    const int k = degree;
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("hodge_star: non-SPD metric sample");
    const Eigen::MatrixXd L = llt.matrixL();
    // Coframe e^i = sum_j L_{ji} dx_j is g-orthonormal; on components the
    // change of basis on degree k is the k-th compound of L.
    const Eigen::MatrixXd Ck = metrics::compound(L, k);
    const Eigen::MatrixXd Cnk = metrics::compound(L, n - k);
    Eigen::MatrixXd Sframe = Eigen::MatrixXd::Zero(grid.comps(n - k), grid.comps(k));
    for (int p = 0; p < grid.comps(k); ++p) {
        double sgn = grid.complement_sign(k, p);
        if (g_perturb_star && p == 0) sgn = -sgn;
        Sframe(grid.complement_pos(k, p), p) = sgn;
    }
    return Cnk * Sframe * Ck.inverse();
}

Complex tau_phase(int n, int degree) {
    const int m = n / 2;
    const int e = (n % 2 == 0) ? degree * (degree - 1) + m : degree * (degree + 1) + m + 1;
    static const Complex table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return table[((e % 4) + 4) % 4];
}

FormField hodge_star(const PeriodicGrid& grid, const metrics::MetricField& metric,
                     const FormField& omega) {
    const int k = omega.degree;
    FormField out(grid, grid.n() - k);
    const int ck = grid.comps(k);
    const int cnk = grid.comps(grid.n() - k);
    Eigen::VectorXcd v(ck);
    for (std::int64_t s = 0; s < grid.sites(); ++s) {
        const Eigen::MatrixXd S = star_block(grid, metric.at(s), k);
        for (int c = 0; c < ck; ++c) v[c] = omega.at(s, c);
        const Eigen::VectorXcd w = S * v;
        for (int c = 0; c < cnk; ++c) out.at(s, c) = w[c];
    }
    return out;
}

FormField tau(const PeriodicGrid& grid, const metrics::MetricField& metric,
              const FormField& omega) {
    FormField out = hodge_star(grid, metric, omega);
    out.data *= tau_phase(grid.n(), omega.degree);
    return out;
}

Eigen::SparseMatrix<Complex> tau_matrix(const PeriodicGrid& grid,
                                        const metrics::MetricField& metric, int degree) {
    const int ck = grid.comps(degree);
    const int cnk = grid.comps(grid.n() - degree);
    const Complex phase = tau_phase(grid.n(), degree);
    std::vector<Eigen::Triplet<Complex>> trip;
    trip.reserve(std::size_t(grid.sites()) * ck * cnk);
    for (std::int64_t s = 0; s < grid.sites(); ++s) {
        const Eigen::MatrixXd S = star_block(grid, metric.at(s), degree);
        for (int i = 0; i < cnk; ++i)
            for (int j = 0; j < ck; ++j)
                if (S(i, j) != 0.0)
                    trip.emplace_back(s * cnk + i, s * ck + j, phase * S(i, j));
    }
    Eigen::SparseMatrix<Complex> T(grid.dofs(grid.n() - degree), grid.dofs(degree));
    T.setFromTriplets(trip.begin(), trip.end());
    T.makeCompressed();
    return T;
}

} // namespace siglab::dec
