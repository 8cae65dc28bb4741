#include "siglab/dec/pairing.hpp"

#include <cmath>
#include <stdexcept>

#include "siglab/dec/coboundary.hpp"
#include "siglab/dec/star.hpp"

namespace siglab::dec {

Complex wedge_integral(const PeriodicGrid& grid, const FormField& alpha,
                       const FormField& beta) {
    if (alpha.degree + beta.degree != grid.n())
        throw std::invalid_argument("wedge_integral: degrees must be complementary");
    const int k = alpha.degree;
    const int ck = grid.comps(k);
    const double hn = std::pow(grid.h(), grid.n());
    Complex acc(0, 0);
    for (std::int64_t s = 0; s < grid.sites(); ++s) {
        for (int c = 0; c < ck; ++c) {
            const int cc = grid.complement_pos(k, c);
            acc += double(grid.complement_sign(k, c)) * alpha.at(s, c) *
                   std::conj(beta.at(s, cc));
        }
    }
    return acc * hn;
}

Complex duality_phase(int n, int degree) { return std::conj(tau_phase(n, degree)); }

FormField mult_operator(const PeriodicGrid& grid, const Eigen::VectorXd& f,
                        const FormField& omega) {
    if (f.size() != grid.sites())
        throw std::invalid_argument("mult_operator: f must be sampled at every site");
    FormField out = omega;
    const int nc = grid.comps(omega.degree);
    for (std::int64_t s = 0; s < grid.sites(); ++s)
        for (int c = 0; c < nc; ++c) out.at(s, c) *= f[s];
    return out;
}

FormField commutator(const PeriodicGrid& grid, const Eigen::VectorXd& f,
                     const FormField& omega) {
    FormField a = coboundary(grid, mult_operator(grid, f, omega));
    FormField b = coboundary(grid, omega);
    b = mult_operator(grid, f, b);
    a.data -= b.data;
    return a;
}

CommutatorReport commutator_bound_check(const PeriodicGrid& grid,
                                        const metrics::MetricField& metric,
                                        const Eigen::VectorXd& f, const FormField& omega,
                                        double allowance_constant) {
    const int n = grid.n();
    const double inv_h = 1.0 / grid.h();
    double max_grad = 0;
    for (std::int64_t s = 0; s < grid.sites(); ++s) {
        double g2 = 0;
        for (int a = 0; a < n; ++a) {
            const double d = (f[grid.shift(s, a, +1)] - f[s]) * inv_h;
            g2 += d * d;
        }
        max_grad = std::max(max_grad, std::sqrt(g2));
    }

    const FormField c = commutator(grid, f, omega);
    MassMatrix Mk(grid, metric, omega.degree);
    MassMatrix Mk1(grid, metric, omega.degree + 1);
    CommutatorReport r;
    r.max_grad = max_grad;
    r.lhs_norm = Mk1.norm(c);
    r.rhs_norm = max_grad / std::sqrt(metric.lower_bound()) * Mk.norm(omega);
    r.ratio = (r.rhs_norm > 0) ? r.lhs_norm / r.rhs_norm : 0.0;
    r.allowance = allowance_constant * grid.h();
    r.measured_excess = std::max(0.0, r.ratio - 1.0);
    r.pass = r.ratio <= 1.0 + r.allowance;
    return r;
}

} // namespace siglab::dec
