#include "siglab/dec/mass.hpp"

#include <cmath>
#include <stdexcept>

#include "siglab/metrics/spd.hpp"

namespace siglab::dec {

MassMatrix::MassMatrix(const PeriodicGrid& grid, const metrics::MetricField& metric,
                       int degree)
    : degree_(degree), hn_(std::pow(grid.h(), grid.n())) {
    if (degree < 0 || degree > grid.n())
        throw std::invalid_argument("mass_matrix: degree out of range");
    const int nc = grid.comps(degree);
    blocks_.reserve(std::size_t(grid.sites()));

    std::vector<Eigen::Triplet<double>> tm, tinv;
    tm.reserve(std::size_t(grid.sites()) * nc * nc);
    tinv.reserve(tm.capacity());
    for (std::int64_t s = 0; s < grid.sites(); ++s) {
        const Eigen::MatrixXd& A = metric.at(s);
        const double det = A.determinant();
        if (!(det > 0))
            throw std::invalid_argument("mass_matrix: non-SPD metric sample");
        Eigen::MatrixXd B = metrics::compound(A.inverse(), degree) * std::sqrt(det);
        B = 0.5 * (B + B.transpose());
        Eigen::LLT<Eigen::MatrixXd> llt(B);
        if (llt.info() != Eigen::Success)
            throw std::invalid_argument("mass_matrix: non-SPD block (metric rejected)");
        const Eigen::MatrixXd Binv = llt.solve(Eigen::MatrixXd::Identity(nc, nc));
        for (int i = 0; i < nc; ++i)
            for (int j = 0; j < nc; ++j) {
                tm.emplace_back(s * nc + i, s * nc + j, B(i, j) * hn_);
                tinv.emplace_back(s * nc + i, s * nc + j, Binv(i, j) / hn_);
            }
        blocks_.push_back(std::move(B));
    }
    M_.resize(grid.dofs(degree), grid.dofs(degree));
    M_.setFromTriplets(tm.begin(), tm.end());
    M_.makeCompressed();
    Minv_.resize(grid.dofs(degree), grid.dofs(degree));
    Minv_.setFromTriplets(tinv.begin(), tinv.end());
    Minv_.makeCompressed();
}

Eigen::VectorXcd MassMatrix::apply(const Eigen::VectorXcd& x) const {
    Eigen::VectorXcd y(x.size());
    y.real() = M_ * x.real();
    y.imag() = M_ * x.imag();
    return y;
}

Complex MassMatrix::inner(const FormField& a, const FormField& b) const {
    return b.data.dot(apply(a.data));  // Eigen dot conjugates its receiver
}

double MassMatrix::norm(const FormField& a) const {
    return std::sqrt(std::max(0.0, inner(a, a).real()));
}

} // namespace siglab::dec
