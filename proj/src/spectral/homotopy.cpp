#include "siglab/spectral/homotopy.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "siglab/metrics/metric_field.hpp"

namespace siglab::spectral {

HomotopyResult homotopy_run(const metrics::MetricField& g0, const metrics::MetricField& g1,
                            const metrics::ExponentLedger& L0,
                            const metrics::ExponentLedger& L1, int steps, int count,
                            double window_lo, double window_hi, const SolverOptions& opts) {
    if (steps < 1) throw std::invalid_argument("homotopy_run: need at least one step");
    const auto& grid = g0.grid();
    HomotopyResult res;
    res.steps.reserve(std::size_t(steps) + 1);

    for (int i = 0; i <= steps; ++i) {
        const double t = double(i) / steps;
        const metrics::MetricField gt = metrics::interpolate_metrics(g0, g1, t);
        SignatureAssembly assembly(grid, gt);
        // printed-formula orientation puts t on L0's reciprocal, so align the
        // path parameter: t = 0 here must reproduce L0
        const metrics::ExponentLedger Lt = metrics::interpolate_exponents(L0, L1, 1.0 - t);
        SpectralReport rep = singular_values(assembly, count, opts, &Lt);
        HomotopyStep st;
        st.t = t;
        st.n_g = metrics::n_of_g(Lt);
        st.kernel_dim = rep.kernel_dim;
        st.sv = rep.sv;
        res.steps.push_back(std::move(st));
    }

    const int kd0 = res.steps.front().kernel_dim;
    for (const auto& st : res.steps) {
        if (st.kernel_dim != kd0) {
            res.kernel_constant = false;
            res.offending_t = st.t;
        }
    }

    const int lo = int(window_lo * count);
    const int hi = int(window_hi * count);
    for (std::size_t i = 1; i < res.steps.size(); ++i) {
        const auto& a = res.steps[i - 1].sv;
        const auto& b = res.steps[i].sv;
        const int n = int(std::min(a.size(), b.size()));
        for (int j = lo; j < std::min(hi, n); ++j) {
            const double base = std::max(a[std::size_t(j)], 1e-300);
            const double jump = std::abs(b[std::size_t(j)] - a[std::size_t(j)]) / base;
            if (jump > res.max_rel_jump) {
                res.max_rel_jump = jump;
                if (jump >= 0.2) res.offending_t = res.steps[i].t;
            }
        }
    }

    res.pass = res.kernel_constant && res.max_rel_jump < 0.2;
    std::ostringstream v;
    if (!res.kernel_constant)
        v << "FAIL: kernel dimension jump at t = " << res.offending_t;
    else if (res.max_rel_jump >= 0.2)
        v << "FAIL: singular-value jump " << res.max_rel_jump << " at t = " << res.offending_t;
    else
        v << "PASS: kernel dim " << kd0 << " constant, max jump " << res.max_rel_jump;
    res.verdict = v.str();
    return res;
}

} // namespace siglab::spectral
