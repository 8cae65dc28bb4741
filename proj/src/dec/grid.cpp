#include "siglab/dec/grid.hpp"

#include <bit>
#include <stdexcept>

namespace siglab::dec {

int binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    int r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

int insertion_sign(int axis, std::uint32_t mask) {
    const std::uint32_t below = mask & ((1u << axis) - 1u);
    return (std::popcount(below) % 2 == 0) ? 1 : -1;
}

int shuffle_sign(std::uint32_t maskI, std::uint32_t maskJ) {
    // Count inversions between the sorted sequences I and J.
    int inv = 0;
    for (int a = 0; a < 32; ++a) {
        if (!(maskI & (1u << a))) continue;
        inv += std::popcount(maskJ & ((1u << a) - 1u));
    }
    return (inv % 2 == 0) ? 1 : -1;
}

PeriodicGrid::PeriodicGrid(int dimension, int resolution)
    : n_(dimension), N_(resolution) {
    if (n_ < 1 || n_ > 4)
        throw std::invalid_argument("PeriodicGrid: dimension must be in [1,4]");
    if (N_ < 4)
        throw std::invalid_argument("PeriodicGrid: resolution must be >= 4");
    m_ = n_ / 2;
    h_ = 1.0 / N_;
    sites_ = 1;
    for (int i = 0; i < n_; ++i) sites_ *= N_;

    masks_.resize(n_ + 1);
    pos_of_mask_.assign(n_ + 1, std::vector<int>(std::size_t(1) << n_, -1));
    for (std::uint32_t mask = 0; mask < (1u << n_); ++mask) {
        const int k = std::popcount(mask);
        pos_of_mask_[k][mask] = int(masks_[k].size());
        masks_[k].push_back(mask);  // increasing masks enumerate lexicographic combinations
    }

    ins_.resize(n_ + 1);
    comp_sign_.resize(n_ + 1);
    comp_pos_.resize(n_ + 1);
    const std::uint32_t full = (1u << n_) - 1u;
    for (int k = 0; k <= n_; ++k) {
        ins_[k].resize(masks_[k].size());
        comp_sign_[k].resize(masks_[k].size());
        comp_pos_[k].resize(masks_[k].size());
        for (std::size_t p = 0; p < masks_[k].size(); ++p) {
            const std::uint32_t I = masks_[k][p];
            if (k < n_) {
                for (int a = 0; a < n_; ++a) {
                    if (I & (1u << a)) continue;
                    InsertionSlot s;
                    s.axis = a;
                    s.target = pos_of_mask_[k + 1][I | (1u << a)];
                    s.sign = insertion_sign(a, I);
                    ins_[k][p].push_back(s);
                }
            }
            const std::uint32_t Ic = full & ~I;
            comp_sign_[k][p] = shuffle_sign(I, Ic);
            comp_pos_[k][p] = pos_of_mask_[n_ - k][Ic];
        }
    }
}

int PeriodicGrid::comps(int degree) const {
    if (degree < 0 || degree > n_)
        throw std::invalid_argument("PeriodicGrid: degree out of range");
    return int(masks_[degree].size());
}

std::int64_t PeriodicGrid::site_of(const std::array<int, 4>& c) const {
    std::int64_t s = 0;
    for (int i = 0; i < n_; ++i) s = s * N_ + c[i];
    return s;
}

std::array<int, 4> PeriodicGrid::coords_of(std::int64_t site) const {
    std::array<int, 4> c{0, 0, 0, 0};
    for (int i = n_ - 1; i >= 0; --i) {
        c[i] = int(site % N_);
        site /= N_;
    }
    return c;
}

std::int64_t PeriodicGrid::shift(std::int64_t site, int axis, int delta) const {
    auto c = coords_of(site);
    c[axis] = ((c[axis] + delta) % N_ + N_) % N_;
    return site_of(c);
}

std::array<double, 4> PeriodicGrid::position(std::int64_t site) const {
    const auto c = coords_of(site);
    std::array<double, 4> x{0, 0, 0, 0};
    for (int i = 0; i < n_; ++i) x[i] = c[i] * h_;
    return x;
}

std::uint32_t PeriodicGrid::comp_mask(int degree, int pos) const {
    return masks_[degree][pos];
}

int PeriodicGrid::comp_pos(int degree, std::uint32_t mask) const {
    return pos_of_mask_[degree][mask];
}

const std::vector<InsertionSlot>& PeriodicGrid::insertions(int degree, int pos) const {
    return ins_[degree][pos];
}

int PeriodicGrid::complement_sign(int degree, int pos) const {
    return comp_sign_[degree][pos];
}

int PeriodicGrid::complement_pos(int degree, int pos) const {
    return comp_pos_[degree][pos];
}

} // namespace siglab::dec
