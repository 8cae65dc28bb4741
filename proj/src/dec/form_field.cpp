#include "siglab/dec/form_field.hpp"

#include "siglab/common/rng.hpp"

namespace siglab::dec {

FormField random_form(const PeriodicGrid& grid, int degree, std::uint64_t seed) {
    FormField f(grid, degree);
    SplitMix64 s(hash_combine(seed, 0x666f726dull));
    for (Eigen::Index i = 0; i < f.data.size(); ++i)
        f.data[i] = Complex(s.symmetric(), s.symmetric());
    return f;
}

FormField sample_form(const PeriodicGrid& grid, int degree,
                      const std::function<Complex(const std::array<double, 4>&, int)>& f) {
    FormField out(grid, degree);
    const int nc = grid.comps(degree);
    for (std::int64_t s = 0; s < grid.sites(); ++s) {
        const auto x = grid.position(s);
        for (int c = 0; c < nc; ++c) out.at(s, c) = f(x, c);
    }
    return out;
}

} // namespace siglab::dec
