#pragma once

#include <vector>

#include "siglab/metrics/exponents.hpp"
#include "siglab/spectral/report.hpp"

namespace siglab::spectral {

struct HomotopyStep {
    double t = 0.0;
    double n_g = 0.0;
    int kernel_dim = 0;
    std::vector<double> sv;   // leading resolvent singular values
};

struct HomotopyResult {
    std::vector<HomotopyStep> steps;
    bool kernel_constant = true;
    double max_rel_jump = 0.0;   // over the fit window, between adjacent steps
    double offending_t = -1.0;
    bool pass = false;
    std::string verdict;
};

/// Assemble and solve along the pointwise geometric-mean path between g0 and
/// g1 on `steps + 1` uniform t values.  The kernel dimension must stay
/// constant and the relative jump of each tracked singular value between
/// adjacent steps must stay below 20% inside the fit window.  The exponent
/// path is the reciprocal-affine one, oriented so t = 0 matches g0.
HomotopyResult homotopy_run(const metrics::MetricField& g0, const metrics::MetricField& g1,
                            const metrics::ExponentLedger& L0,
                            const metrics::ExponentLedger& L1, int steps, int count,
                            double window_lo = 0.2, double window_hi = 0.7,
                            const SolverOptions& opts = {});

} // namespace siglab::spectral
