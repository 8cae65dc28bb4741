#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>

#include "siglab/dec/grid.hpp"

namespace siglab::dec {

using Complex = std::complex<double>;

/// A degree-k cochain: one complex coefficient per (site, component) in the
/// coordinate basis dx_I.  Layout is site-major: data[site * comps + c].
/// Coefficients carry no metric; all inner products go through a mass matrix.
struct FormField {
    const PeriodicGrid* grid = nullptr;
    int degree = 0;
    Eigen::VectorXcd data;

    FormField() = default;
    FormField(const PeriodicGrid& g, int k)
        : grid(&g), degree(k), data(Eigen::VectorXcd::Zero(g.dofs(k))) {}

    Complex& at(std::int64_t site, int comp) {
        return data[site * grid->comps(degree) + comp];
    }
    Complex at(std::int64_t site, int comp) const {
        return data[site * grid->comps(degree) + comp];
    }
};

/// Deterministic pseudo-random field (fixed seed -> identical bits).
FormField random_form(const PeriodicGrid& grid, int degree, std::uint64_t seed);

/// Sample a coefficient function: comp c at position x.
FormField sample_form(const PeriodicGrid& grid, int degree,
                      const std::function<Complex(const std::array<double, 4>&, int)>& f);

} // namespace siglab::dec
