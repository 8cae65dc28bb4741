#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "siglab/dec/grid.hpp"

namespace siglab::metrics {

/// A measurable field of SPD matrices A(x) sampled at the lattice sites,
/// together with the declared lower bound B (A >= B * Id everywhere) and the
/// declared integrability exponent p_int (||A|| in L^{p_int} by construction;
/// sampling cannot certify integrability, so p_int is metadata).
class MetricField {
public:
    MetricField(const dec::PeriodicGrid& grid, std::vector<Eigen::MatrixXd> blocks,
                double lower_bound, double p_int, bool flat = false,
                std::string descriptor = "custom");

    const dec::PeriodicGrid& grid() const { return *grid_; }
    const Eigen::MatrixXd& at(std::int64_t site) const { return A_[std::size_t(site)]; }
    double lower_bound() const { return B_; }
    double p_int() const { return p_int_; }
    /// True only for the flat reference; enables exact Fourier fast paths.
    bool is_flat() const { return flat_; }
    const std::string& descriptor() const { return desc_; }

    /// Empirical (int ||A(x)||^p dx)^(1/p) over the sample; diagnostic only.
    double empirical_lp_norm(double p) const;

private:
    const dec::PeriodicGrid* grid_;
    std::vector<Eigen::MatrixXd> A_;
    double B_;
    double p_int_;
    bool flat_;
    std::string desc_;
};

/// Floor used when a constructor cannot certify a larger bound (Def-style
/// strict B > 1); the flat reference itself carries B = 1.
inline constexpr double kDefaultFloor = 1.0 + 1e-6;

/// A == Identity everywhere, B = 1 (the reference structure).
MetricField flat_metric(const dec::PeriodicGrid& grid);

/// A(x) = max(B, |x - x0|^-beta) * Id with torus distance, sites clamped at
/// the profile value at distance h/2.  Requires beta > 0 and beta * p_int < n.
/// Pass p_int <= 0 to derive it as n/beta minus a 0.5 safety margin.
MetricField conformal_singular_metric(const dec::PeriodicGrid& grid,
                                      const std::array<double, 4>& center, double beta,
                                      double floor_B, double p_int = -1.0);

/// Matrix-valued transition fields psi_j (zero-extended outside their support).
struct TransitionData {
    struct Field {
        std::vector<Eigen::MatrixXd> psi;  // one n x n matrix per site
        std::vector<char> support;         // mask; psi is zero outside
    };
    std::vector<Field> fields;
};

/// A(x) = Id + sum_j psi_j(x)^T psi_j(x); automatically A >= Id.
MetricField metric_from_transitions(const dec::PeriodicGrid& grid, const TransitionData& t);

/// Reproducible heavy-tailed field calibrated so the empirical L^{p_int} norm
/// is stable under refinement while the L^{2 p_int} sample norm diverges.
MetricField random_rough_metric(const dec::PeriodicGrid& grid, double p_int,
                                std::uint64_t seed);

/// Pointwise Ando-Kubo interpolation of two metrics on the same grid;
/// endpoints are returned verbatim at t = 0, 1.  The floor interpolates as
/// B0^(1-t) B1^t and p_int reciprocal-affinely.
MetricField interpolate_metrics(const MetricField& g0, const MetricField& g1, double t);

} // namespace siglab::metrics
