#include "siglab/dec/coboundary.hpp"

#include <stdexcept>
#include <vector>

namespace siglab::dec {

Eigen::SparseMatrix<double> coboundary_matrix(const PeriodicGrid& grid, int degree) {
    if (degree < 0 || degree >= grid.n())
        throw std::invalid_argument("coboundary: degree out of range");
    const int ck = grid.comps(degree);
    const int ck1 = grid.comps(degree + 1);
    const double inv_h = 1.0 / grid.h();

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(std::size_t(grid.sites()) * ck * (grid.n() - degree) * 2);
    for (std::int64_t s = 0; s < grid.sites(); ++s) {
        for (int c = 0; c < ck; ++c) {
            const std::int64_t col = s * ck + c;
            for (const auto& slot : grid.insertions(degree, c)) {
                const std::int64_t sp = grid.shift(s, slot.axis, +1);
                // (d omega)_J(x) += sign * (omega_I(x + h e_a) - omega_I(x)) / h
                trip.emplace_back(s * ck1 + slot.target, sp * ck + c, slot.sign * inv_h);
                trip.emplace_back(s * ck1 + slot.target, col, -slot.sign * inv_h);
            }
        }
    }
    Eigen::SparseMatrix<double> d(grid.dofs(degree + 1), grid.dofs(degree));
    d.setFromTriplets(trip.begin(), trip.end());
    d.makeCompressed();
    return d;
}

Eigen::VectorXcd apply_real(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXcd& x) {
    Eigen::VectorXd re = A * x.real();
    Eigen::VectorXd im = A * x.imag();
    Eigen::VectorXcd y(re.size());
    y.real() = re;
    y.imag() = im;
    return y;
}

FormField coboundary(const PeriodicGrid& grid, const FormField& omega) {
    if (omega.degree >= grid.n())
        throw std::invalid_argument("coboundary: top-degree form has no coboundary");
    FormField out(grid, omega.degree + 1);
    const int ck = grid.comps(omega.degree);
    const double inv_h = 1.0 / grid.h();
    for (std::int64_t s = 0; s < grid.sites(); ++s) {
        for (int c = 0; c < ck; ++c) {
            for (const auto& slot : grid.insertions(omega.degree, c)) {
                const std::int64_t sp = grid.shift(s, slot.axis, +1);
                out.at(s, slot.target) +=
                    double(slot.sign) * (omega.at(sp, c) - omega.at(s, c)) * inv_h;
            }
        }
    }
    return out;
}

} // namespace siglab::dec
