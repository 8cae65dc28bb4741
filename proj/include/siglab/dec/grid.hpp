#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace siglab::dec {

/// Binomial coefficient for the small arguments used throughout (n <= 4).
int binomial(int n, int k);

/// One slot of the coboundary stencil: wedging dx_axis onto a component of
/// degree k lands in component `target` of degree k+1 with sign `sign`.
struct InsertionSlot {
    int axis;
    int target;
    int sign;
};

/// The discretized unit torus T^n = R^n / Z^n sampled on a regular lattice
/// with N sites per axis.  Sites are indexed row-major, last axis fastest.
/// Degree-k form components are the increasing multi-indices of {0..n-1} in
/// lexicographic order, addressed by position or by bitmask.
class PeriodicGrid {
public:
    PeriodicGrid(int dimension, int resolution);

    int n() const { return n_; }
    int N() const { return N_; }
    double h() const { return h_; }
    /// Middle degree floor(n/2).
    int middle_degree() const { return m_; }

    std::int64_t sites() const { return sites_; }
    int comps(int degree) const;
    std::int64_t dofs(int degree) const { return sites_ * comps(degree); }

    std::int64_t site_of(const std::array<int, 4>& c) const;
    std::array<int, 4> coords_of(std::int64_t site) const;
    /// Periodic neighbor along one axis (delta in {-1, +1} typically).
    std::int64_t shift(std::int64_t site, int axis, int delta) const;
    /// Physical position of a site in [0,1)^n.
    std::array<double, 4> position(std::int64_t site) const;

    /// Component bitmask / lexicographic position for a given degree.
    std::uint32_t comp_mask(int degree, int pos) const;
    int comp_pos(int degree, std::uint32_t mask) const;

    /// All (axis, target, sign) slots for wedging a coordinate differential
    /// onto component `pos` of degree k.  Used by the coboundary and the
    /// multiplication-operator commutator.
    const std::vector<InsertionSlot>& insertions(int degree, int pos) const;

    /// Sign eps(I) with dx_I ^ dx_{I^c} = eps(I) dx_{1..n}.
    int complement_sign(int degree, int pos) const;
    int complement_pos(int degree, int pos) const;

private:
    int n_, N_, m_;
    double h_;
    std::int64_t sites_;
    std::vector<std::vector<std::uint32_t>> masks_;              // per degree
    std::vector<std::vector<int>> pos_of_mask_;                  // per degree, 1<<n entries
    std::vector<std::vector<std::vector<InsertionSlot>>> ins_;   // [degree][pos]
    std::vector<std::vector<int>> comp_sign_, comp_pos_;         // [degree][pos]
};

/// Sign of dx_i ^ dx_I -> dx_{I + i}; requires i not in I.
int insertion_sign(int axis, std::uint32_t mask);

/// Sign of the permutation sorting (I, J) for disjoint masks I, J.
int shuffle_sign(std::uint32_t maskI, std::uint32_t maskJ);

} // namespace siglab::dec
