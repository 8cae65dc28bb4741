#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "siglab/metrics/metric_field.hpp"
#include "siglab/spectral/fourier.hpp"
#include "siglab/spectral/homotopy.hpp"
#include "siglab/spectral/report.hpp"

using namespace siglab;

namespace {

// Independent oracle: eigenvalues of the forward-difference Hodge Laplacian
// on middle forms of the flat torus, by direct enumeration of the symbol
// sum_i (2/h)^2 sin^2(pi k_i / N) with component multiplicity C(n, m).
std::vector<double> flat_laplace_oracle(int n, int N) {
    dec::PeriodicGrid g(n, N);
    std::vector<double> lam;
    lam.reserve(std::size_t(g.dofs(g.middle_degree())));
    const int mult = g.comps(g.middle_degree());
    for (std::int64_t s = 0; s < g.sites(); ++s) {
        const auto k = g.coords_of(s);
        double v = 0;
        for (int a = 0; a < n; ++a) {
            const double t = 2.0 * N * std::sin(M_PI * k[a] / N);
            v += t * t;
        }
        for (int c = 0; c < mult; ++c) lam.push_back(v);
    }
    std::sort(lam.begin(), lam.end());
    return lam;
}

} // namespace

TEST_CASE("assembly: flat T^1 N=4 singular values of d on 0-forms") {
    dec::PeriodicGrid g(1, 4);
    auto gm = metrics::flat_metric(g);
    spectral::SignatureAssembly A(g, gm);
    auto sp = spectral::middle_spectrum(A, {});
    REQUIRE(sp.lambda.size() == 4);
    CHECK(sp.kernel_dim == 1);
    CHECK(std::sqrt(sp.lambda[1]) == doctest::Approx(5.65685424949238).epsilon(1e-12));
    CHECK(std::sqrt(sp.lambda[2]) == doctest::Approx(5.65685424949238).epsilon(1e-12));
    CHECK(std::sqrt(sp.lambda[3]) == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("assembly: graded self-adjointness is exact") {
    dec::PeriodicGrid g(2, 8);
    auto gm = metrics::random_rough_metric(g, 4.0, 3);
    spectral::SignatureAssembly A(g, gm);
    CHECK(A.graded_selfadjoint_defect() <= 1e-10);
}

TEST_CASE("spectra: dense path matches the DFT closed form on flat T^2 N=32") {
    dec::PeriodicGrid g(2, 32);
    auto gm = metrics::flat_metric(g);
    spectral::SignatureAssembly A(g, gm);
    spectral::SolverOptions o;
    o.mode = spectral::SolverOptions::Mode::Dense;
    auto sp = spectral::middle_spectrum(A, o);
    const auto oracle = flat_laplace_oracle(2, 32);
    REQUIRE(int(sp.lambda.size()) == int(oracle.size()));
    double worst = 0;
    for (std::size_t i = 2; i < oracle.size(); ++i)  // nonzero part
        worst = std::max(worst,
                         std::abs(sp.lambda[Eigen::Index(i)] - oracle[i]) / oracle[i]);
    CHECK(worst <= 1e-10);
    CHECK(sp.kernel_dim == 2);
}

TEST_CASE("spectra: Fourier fast path equals the oracle exactly") {
    for (int n : {1, 2, 3}) {
        dec::PeriodicGrid g(n, 8);
        auto gm = metrics::flat_metric(g);
        spectral::SignatureAssembly A(g, gm);
        auto sp = spectral::middle_spectrum(A, {});
        const auto oracle = flat_laplace_oracle(n, 8);
        double worst = 0;
        for (std::size_t i = 0; i < oracle.size(); ++i)
            worst = std::max(worst, std::abs(sp.lambda[Eigen::Index(i)] - oracle[i]));
        CHECK(worst <= 1e-9);
        CHECK(sp.kernel_dim == dec::binomial(n, n / 2));
    }
}

TEST_CASE("spectra: kernel dimension and gap on flat tori") {
    SUBCASE("T^2") {
        dec::PeriodicGrid g(2, 16);
        auto gm = metrics::flat_metric(g);
        spectral::SignatureAssembly A(g, gm);
        auto sp = spectral::middle_spectrum(A, {});
        CHECK(sp.kernel_dim == 2);
        CHECK(sp.kernel_gap_ratio < 1e-6);
    }
    SUBCASE("T^3") {
        dec::PeriodicGrid g(3, 16);
        auto gm = metrics::flat_metric(g);
        spectral::SignatureAssembly A(g, gm);
        auto sp = spectral::middle_spectrum(A, {});
        CHECK(sp.kernel_dim == 3);
        CHECK(sp.kernel_gap_ratio < 1e-6);
    }
}

TEST_CASE("spectra: dense, Fourier and Lanczos agree pairwise") {
    dec::PeriodicGrid g(2, 16);
    auto gm = metrics::flat_metric(g);
    spectral::SignatureAssembly A(g, gm);
    spectral::SolverOptions o;
    auto spF = spectral::middle_spectrum(A, o);
    o.mode = spectral::SolverOptions::Mode::Dense;
    auto spD = spectral::middle_spectrum(A, o);
    o.mode = spectral::SolverOptions::Mode::Iterative;
    o.nev = 50;
    auto spI = spectral::middle_spectrum(A, o);
    REQUIRE(spI.converged);
    double df = 0, di = 0;
    for (int i = 0; i < 50; ++i) {
        df = std::max(df, std::abs(spD.lambda[i] - spF.lambda[i]) /
                              std::max(1.0, spF.lambda[i]));
        di = std::max(di, std::abs(spI.lambda[i] - spF.lambda[i]) /
                              std::max(1.0, spF.lambda[i]));
    }
    CHECK(df <= 1e-10);
    CHECK(di <= 1e-7);
}

TEST_CASE("spectra: the two-sided spectrum is symmetric (grading route, even n)") {
    // The graded operator H has blocks d and its M-adjoint; its eigenvalues
    // must form a +-symmetric multiset around the kernel.
    dec::PeriodicGrid g(2, 6);
    auto gm = metrics::random_rough_metric(g, 4.0, 99);
    spectral::SignatureAssembly A(g, gm);
    const Eigen::Index nl = g.dofs(0), nm = g.dofs(1), nh = g.dofs(2);
    const Eigen::Index dim = nl + nm + nh;
    Eigen::MatrixXd MH = Eigen::MatrixXd::Zero(dim, dim);
    const Eigen::MatrixXd a = Eigen::MatrixXd(A.M_m().matrix() * A.d_mm1());
    const Eigen::MatrixXd b = Eigen::MatrixXd(A.M_mp1().matrix() * A.d_m());
    MH.block(nl, 0, nm, nl) = a;
    MH.block(0, nl, nl, nm) = a.transpose();
    MH.block(nl + nm, nl, nh, nm) = b;
    MH.block(nl, nl + nm, nm, nh) = b.transpose();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim, dim);
    M.block(0, 0, nl, nl) = Eigen::MatrixXd(A.M_mm1().matrix());
    M.block(nl, nl, nm, nm) = Eigen::MatrixXd(A.M_m().matrix());
    M.block(nl + nm, nl + nm, nh, nh) = Eigen::MatrixXd(A.M_mp1().matrix());
    auto eig = spectral::dense_generalized_eig(MH, M, false);
    double worst = 0;
    for (Eigen::Index i = 0; i < dim; ++i) {
        const double plus = eig.lambda[dim - 1 - i];
        const double minus = -eig.lambda[i];
        worst = std::max(worst, std::abs(plus - minus) /
                                    std::max(1.0, std::abs(plus)));
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("report: synthetic diagonal input is echoed and fitted exactly") {
    std::vector<double> sv(400);
    for (int j = 0; j < 400; ++j) sv[std::size_t(j)] = std::pow(j + 1.0, -0.5);
    auto rep = spectral::report_from_values(sv, 2.0);
    CHECK(rep.sv == sv);
    spectral::attach_decay_fit(rep);
    CHECK(std::abs(rep.slope + 0.5) <= 1e-12);
    CHECK(rep.decay_pass);
}

TEST_CASE("report: decay_fit input validation") {
    std::vector<double> tiny(30, 1.0);
    CHECK_THROWS_AS(spectral::decay_fit(tiny), std::invalid_argument);
}

TEST_CASE("report: flat T^2 N=32 slope lands within 0.15 of -1/2") {
    dec::PeriodicGrid g(2, 32);
    auto gm = metrics::flat_metric(g);
    spectral::SignatureAssembly A(g, gm);
    auto rep = spectral::singular_values(A, 600, {});
    spectral::attach_decay_fit(rep);
    CHECK(rep.kernel_dim == 2);
    CHECK(std::abs(rep.slope + 0.5) <= 0.15);
    CHECK(rep.decay_pass);
}

TEST_CASE("report: count exceeding the space is rejected") {
    dec::PeriodicGrid g(2, 4);
    auto gm = metrics::flat_metric(g);
    spectral::SignatureAssembly A(g, gm);
    CHECK_THROWS_AS(spectral::singular_values(A, 10000, {}), std::invalid_argument);
}

TEST_CASE("report: JSON and CSV carry the contract fields") {
    dec::PeriodicGrid g(2, 8);
    auto gm = metrics::flat_metric(g);
    spectral::SignatureAssembly A(g, gm);
    auto rep = spectral::singular_values(A, 60, {});
    spectral::attach_decay_fit(rep);
    const std::string js = rep.to_json();
    for (const char* key : {"\"n\"", "\"N\"", "\"metric\"", "\"n_g\"", "\"mu\"",
                            "\"kernel_dim\"", "\"slope\"", "\"verdicts\""})
        CHECK(js.find(key) != std::string::npos);
    const std::string csv = rep.to_csv();
    CHECK(csv.rfind("j,mu_j\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 61);
}

TEST_CASE("homotopy: constant path, flat endpoints") {
    dec::PeriodicGrid g(2, 8);
    auto gm = metrics::flat_metric(g);
    auto L = metrics::flat_ledger(2);
    auto res = spectral::homotopy_run(gm, gm, L, L, 4, 40);
    CHECK(res.pass);
    CHECK(res.max_rel_jump == 0.0);
    for (const auto& st : res.steps) CHECK(st.kernel_dim == 2);
}

TEST_CASE("homotopy: flat to conformal keeps the kernel and small jumps") {
    dec::PeriodicGrid g(2, 12);
    auto g0 = metrics::flat_metric(g);
    auto g1 = metrics::conformal_singular_metric(g, {0.3, 0.6, 0, 0}, 0.5, 1.0, 3.0);
    auto L0 = metrics::flat_ledger(2);
    auto L1 = metrics::exponents_quasiconformal(2, 4.0);
    auto res = spectral::homotopy_run(g0, g1, L0, L1, 11, 60);
    CHECK(res.pass);
    CHECK(res.kernel_constant);
    for (const auto& st : res.steps) CHECK(st.kernel_dim == 2);
    // endpoint ledgers reproduce: t = 0 carries L0's n(g)
    CHECK(res.steps.front().n_g == doctest::Approx(metrics::n_of_g(L0)));
    CHECK(res.steps.back().n_g == doctest::Approx(metrics::n_of_g(L1)));
}

TEST_CASE("homotopy: endpoint reports equal standalone runs") {
    dec::PeriodicGrid g(2, 8);
    auto g0 = metrics::flat_metric(g);
    auto g1 = metrics::conformal_singular_metric(g, {0.4, 0.2, 0, 0}, 0.4, 1.0, 3.0);
    auto L = metrics::flat_ledger(2);
    auto res = spectral::homotopy_run(g0, g1, L, L, 1, 40);
    spectral::SignatureAssembly A0(g, g0), A1(g, g1);
    auto r0 = spectral::singular_values(A0, 40, {});
    auto r1 = spectral::singular_values(A1, 40, {});
    for (int j = 0; j < 40; ++j) {
        CHECK(res.steps.front().sv[std::size_t(j)] == r0.sv[std::size_t(j)]);
        CHECK(res.steps.back().sv[std::size_t(j)] == r1.sv[std::size_t(j)]);
    }
}

TEST_CASE("homotopy: a violent one-step path fails the jump verdict") {
    dec::PeriodicGrid g(2, 8);
    auto g0 = metrics::flat_metric(g);
    std::vector<Eigen::MatrixXd> blocks(std::size_t(g.sites()),
                                        25.0 * Eigen::MatrixXd::Identity(2, 2));
    metrics::MetricField g1(g, std::move(blocks), 1.0, 10.0, false, "scaled25");
    auto L = metrics::flat_ledger(2);
    auto res = spectral::homotopy_run(g0, g1, L, L, 1, 40);
    CHECK_FALSE(res.pass);
    CHECK(res.max_rel_jump >= 0.2);
}
