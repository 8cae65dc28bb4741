#include "siglab/spectral/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace siglab::spectral {

namespace {

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

DecayFit decay_fit(const std::vector<double>& sv, double q_lo, double q_hi) {
    const int n = int(sv.size());
    if (n < 50)
        throw std::invalid_argument("decay_fit: need at least 50 singular values");
    DecayFit f;
    f.window_lo = int(q_lo * n);
    f.window_hi = int(q_hi * n);
    if (f.window_hi - f.window_lo < 8)
        throw std::invalid_argument("decay_fit: fit window too small");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int cnt = f.window_hi - f.window_lo;
    for (int i = f.window_lo; i < f.window_hi; ++i) {
        if (!(sv[std::size_t(i)] > 0))
            throw std::invalid_argument("decay_fit: nonpositive value in window");
        const double x = std::log(double(i + 1));
        const double y = std::log(sv[std::size_t(i)]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double den = cnt * sxx - sx * sx;
    f.slope = (cnt * sxy - sx * sy) / den;
    const double icept = (sy - f.slope * sx) / cnt;
    double ss = 0;
    for (int i = f.window_lo; i < f.window_hi; ++i) {
        const double x = std::log(double(i + 1));
        const double r = std::log(sv[std::size_t(i)]) - (icept + f.slope * x);
        ss += r * r;
    }
    const double sigma2 = ss / std::max(1, cnt - 2);
    f.band = 1.96 * std::sqrt(sigma2 * cnt / den);
    return f;
}

SpectralReport singular_values(const SignatureAssembly& assembly, int count,
                               const SolverOptions& opts,
                               const metrics::ExponentLedger* ledger) {
    const auto& grid = assembly.grid();
    const bool even = assembly.even();
    SpectralReport rep;
    rep.n = grid.n();
    rep.N = grid.N();
    rep.metric = assembly.metric().descriptor();
    metrics::ExponentLedger flat = metrics::flat_ledger(grid.n());
    rep.n_g = metrics::n_of_g(ledger ? *ledger : flat);
    if (count > grid.dofs(assembly.middle()))
        throw std::invalid_argument("singular_values: count exceeds space dimension");

    SolverOptions o = opts;
    if (o.nev <= 0) {
        // Odd parity only keeps the coexact share (about 2/3 on the torus);
        // over-request so `count` survives the filter.
        o.nev = even ? count + 8 : 2 * count + 16;
    }
    const MiddleSpectrum sp = middle_spectrum(assembly, o);
    rep.kernel_dim = sp.kernel_dim;
    rep.kernel_gap_ratio = sp.kernel_gap_ratio;
    rep.gap_ambiguous = sp.gap_ambiguous;
    rep.solver_converged = sp.converged;
    rep.solver_notes = sp.notes;
    if (!sp.converged)
        rep.solver_notes += "residual " + std::to_string(sp.max_residual) + "; ";

    for (Eigen::Index i = 0; i < sp.lambda.size(); ++i) {
        const char cls = sp.mclass[std::size_t(i)];
        if (cls == 'h') continue;
        if (!even && cls != 'c') continue;  // odd parity lives on supp d
        const double mu = std::sqrt(std::max(0.0, sp.lambda[i]));
        rep.dee_mu.push_back(mu);
        rep.sv.push_back(even ? 1.0 / (1.0 + mu) : mu / (1.0 + mu * mu));
        if (int(rep.sv.size()) >= count) break;
    }
    if (int(rep.sv.size()) < count) {
        rep.solver_notes += "requested " + std::to_string(count) + " values, produced " +
                            std::to_string(rep.sv.size()) + "; ";
    }
    return rep;
}

SpectralReport report_from_values(std::vector<double> sv, double n_g) {
    SpectralReport rep;
    rep.metric = "synthetic";
    rep.n_g = n_g;
    rep.sv = std::move(sv);
    return rep;
}

void attach_decay_fit(SpectralReport& rep, double q_lo, double q_hi) {
    const DecayFit f = decay_fit(rep.sv, q_lo, q_hi);
    rep.slope = f.slope;
    rep.slope_band = f.band;
    rep.bound = -1.0 / rep.n_g;
    rep.decay_pass = rep.slope <= rep.bound + 0.2;
    rep.has_fit = true;
}

std::string SpectralReport::to_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["N"] = N;
    j["metric"] = metric;
    j["n_g"] = n_g;
    j["mu"] = sv;
    j["kernel_dim"] = kernel_dim;
    j["kernel_gap_ratio"] = kernel_gap_ratio;
    j["gap_ambiguous"] = gap_ambiguous;
    j["solver"] = {{"converged", solver_converged}, {"notes", solver_notes}};
    if (has_fit) {
        j["slope"] = slope;
        j["band"] = slope_band;
        j["bound"] = bound;
        j["verdicts"] = {{"decay", decay_pass ? "PASS" : "FAIL"}};
    }
    return j.dump(2);
}

std::string SpectralReport::to_csv() const {
    std::ostringstream os;
    os << "j,mu_j\n";
    for (std::size_t i = 0; i < sv.size(); ++i)
        os << (i + 1) << "," << fmt17(sv[i]) << "\n";
    return os.str();
}

} // namespace siglab::spectral
