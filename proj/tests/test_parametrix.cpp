#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "siglab/dec/coboundary.hpp"
#include "siglab/metrics/metric_field.hpp"
#include "siglab/spectral/analysis.hpp"
#include "siglab/spectral/parametrix.hpp"

using namespace siglab;

namespace {

dec::FormField fourier_mode(const dec::PeriodicGrid& g, int degree,
                            const std::array<int, 4>& k, int comp) {
    dec::FormField w(g, degree);
    for (std::int64_t s = 0; s < g.sites(); ++s) {
        const auto x = g.position(s);
        double phase = 0;
        for (int a = 0; a < g.n(); ++a) phase += 2 * M_PI * k[a] * x[a];
        w.at(s, comp) = dec::Complex(std::cos(phase), std::sin(phase));
    }
    return w;
}

} // namespace

TEST_CASE("parametrix: single Fourier mode is inverted exactly") {
    dec::PeriodicGrid g(2, 16);
    // omega = e^{2 pi i k.x} dx_0 with k = (1, 2); t(d omega) must reproduce
    // the mode's preimage so that d t d omega = d omega to rounding.
    auto w = fourier_mode(g, 1, {1, 2, 0, 0}, 0);
    CHECK(spectral::parametrix_identity_check(g, w) <= 1e-12);
}

TEST_CASE("parametrix: harmonic input is annihilated") {
    dec::PeriodicGrid g(2, 8);
    dec::FormField xi(g, 1);
    for (std::int64_t s = 0; s < g.sites(); ++s) xi.at(s, 0) = 1.0;  // constant
    spectral::ParametrixOperator t(g, 1);
    CHECK(t.apply(xi).data.norm() <= 1e-13);
}

TEST_CASE("parametrix: d t d = d on random mid-degree forms") {
    double worst = 0;
    for (int n : {2, 3}) {
        dec::PeriodicGrid g(n, 16);
        for (int trial = 0; trial < 25; ++trial) {
            auto w = dec::random_form(g, g.middle_degree(), 500 + trial);
            worst = std::max(worst, spectral::parametrix_identity_check(g, w));
        }
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("parametrix: identity check rejects closed input") {
    dec::PeriodicGrid g(2, 8);
    dec::FormField w(g, 1);
    for (std::int64_t s = 0; s < g.sites(); ++s) w.at(s, 0) = 2.0;
    CHECK_THROWS_AS(spectral::parametrix_identity_check(g, w), std::invalid_argument);
}

TEST_CASE("parametrix: multiplier norm decays like 1/(2 pi |k|)") {
    dec::PeriodicGrid g(2, 32);
    spectral::ParametrixOperator t(g, 1);
    // per-axis symbol bounds give ||that(k)|| * 2 pi |k| in [1, pi/2]
    for (int k1 = 1; k1 <= 8; ++k1)
        for (int k2 = 0; k2 <= 8; ++k2) {
            const double nrm = t.multiplier_norm({k1, k2, 0, 0});
            const double scaled = nrm * 2 * M_PI * std::hypot(k1, k2);
            CHECK(scaled >= 0.999);
            CHECK(scaled <= M_PI / 2 * 1.001);
        }
}

TEST_CASE("truncation: K = 0 is the identity, K > N/2 kills everything") {
    dec::PeriodicGrid g(2, 8);
    spectral::ParametrixOperator t(g, 1);
    auto xi = dec::random_form(g, 1, 9);
    auto same = t.truncate(xi, 0.0);
    CHECK((same.data - xi.data).norm() <= 1e-12 * xi.data.norm());
    auto none = t.truncate(xi, g.N() / 2.0 + 1.0);
    CHECK(none.data.norm() <= 1e-12 * xi.data.norm());
}

TEST_CASE("truncation: tail proxy slope matches n/N_lem - 1") {
    dec::PeriodicGrid g(2, 32);
    auto rep = spectral::truncation_tail_report(g, 4.0, {2, 3, 4, 5, 6, 8, 10});
    CHECK(rep.expected_sup_slope == doctest::Approx(-0.5));
    CHECK(std::abs(rep.sup_slope - rep.expected_sup_slope) <=
          0.3 * std::abs(rep.expected_sup_slope));
    // monotone: sup proxy decreasing, trace proxy increasing
    for (std::size_t i = 1; i < rep.K.size(); ++i) {
        CHECK(rep.sup_proxy[i] < rep.sup_proxy[i - 1]);
        CHECK(rep.trace_proxy[i] > rep.trace_proxy[i - 1]);
    }
}

TEST_CASE("kernel analysis: flat and rough counts with rank cross-check") {
    for (int n : {1, 2, 3}) {
        dec::PeriodicGrid g(n, 8);
        for (int variant = 0; variant < 2; ++variant) {
            auto gm = variant == 0
                          ? metrics::flat_metric(g)
                          : metrics::conformal_singular_metric(g, {0.3, 0.7, 0.2, 0},
                                                               0.5, 1.0, 0.8 * n);
            spectral::SignatureAssembly A(g, gm);
            auto ka = spectral::kernel_analysis(A);
            CHECK(ka.dim == ka.expected);
            CHECK(ka.finite_rank_check);
            CHECK_FALSE(ka.ambiguous);
            REQUIRE(int(ka.basis.size()) == ka.dim);
            // basis is g-orthonormal
            dec::MassMatrix Mm(g, gm, g.middle_degree());
            for (int i = 0; i < ka.dim; ++i)
                for (int j = 0; j <= i; ++j) {
                    const auto ip = Mm.inner(ka.basis[std::size_t(i)],
                                             ka.basis[std::size_t(j)]);
                    CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) <= 1e-8);
                }
        }
    }
}

TEST_CASE("fredholm module: even-parity identities") {
    dec::PeriodicGrid g(2, 8);
    auto gm = metrics::random_rough_metric(g, 4.0, 64);
    spectral::SignatureAssembly A(g, gm);
    Eigen::VectorXd phi(g.sites());
    for (std::int64_t s = 0; s < g.sites(); ++s)
        phi[s] = std::sin(2 * M_PI * g.position(s)[0]);
    auto rep = spectral::fredholm_module_check(A, phi);
    CHECK(rep.even);
    CHECK(rep.grading_anticommute_defect <= 1e-10);
    CHECK(rep.f_selfadjoint_defect <= 1e-10);
    CHECK(rep.fsq_identity_max_err <= 1e-10);
    CHECK(rep.commutator_norm > 0.0);
    // pointwise-tau anticommutation is a first-order diagnostic, not zero
    CHECK(rep.pointwise_tau_defect > 1e-6);
}

TEST_CASE("fredholm module: constant function commutes with F") {
    dec::PeriodicGrid g(2, 8);
    auto gm = metrics::flat_metric(g);
    spectral::SignatureAssembly A(g, gm);
    Eigen::VectorXd phi = Eigen::VectorXd::Constant(g.sites(), 2.0);
    auto rep = spectral::fredholm_module_check(A, phi);
    CHECK(rep.commutator_norm <= 1e-10);
}

TEST_CASE("fredholm module: pointwise tau defect halves under refinement") {
    std::vector<double> defect;
    for (int N : {8, 16, 32}) {
        dec::PeriodicGrid g(2, N);
        auto gm = metrics::flat_metric(g);
        spectral::SignatureAssembly A(g, gm);
        defect.push_back(A.smooth_probe_defect());
    }
    CHECK(defect[1] / defect[0] == doctest::Approx(0.5).epsilon(0.25));
    CHECK(defect[2] / defect[1] == doctest::Approx(0.5).epsilon(0.25));
}

TEST_CASE("fredholm module: [F, phi] norm stays bounded under refinement") {
    // compactness proxy: the commutator norm trajectory must not blow up
    std::vector<double> norms;
    for (int N : {8, 12, 16}) {
        dec::PeriodicGrid g(2, N);
        auto gm = metrics::flat_metric(g);
        spectral::SignatureAssembly A(g, gm);
        Eigen::VectorXd phi(g.sites());
        for (std::int64_t s = 0; s < g.sites(); ++s)
            phi[s] = std::sin(2 * M_PI * g.position(s)[0]);
        norms.push_back(spectral::fredholm_module_check(A, phi).commutator_norm);
    }
    const double lo = *std::min_element(norms.begin(), norms.end());
    const double hi = *std::max_element(norms.begin(), norms.end());
    CHECK(lo > 0.0);
    CHECK(hi / lo < 2.0);
}

TEST_CASE("fredholm module: odd parity is self-adjoint by construction") {
    dec::PeriodicGrid g(3, 4);
    auto gm = metrics::random_rough_metric(g, 4.0, 12);
    spectral::SignatureAssembly A(g, gm);
    Eigen::VectorXd phi(g.sites());
    for (std::int64_t s = 0; s < g.sites(); ++s)
        phi[s] = std::cos(2 * M_PI * g.position(s)[2]);
    auto rep = spectral::fredholm_module_check(A, phi);
    CHECK_FALSE(rep.even);
    CHECK(rep.f_selfadjoint_defect <= 1e-8);
    CHECK(rep.commutator_norm > 0.0);
}

TEST_CASE("signature: flat T^4 intersection form is balanced") {
    dec::PeriodicGrid g(4, 4);
    auto gm = metrics::flat_metric(g);
    spectral::SignatureAssembly A(g, gm);
    CHECK(spectral::signature_pairing(A) == 0);
}

TEST_CASE("signature: scaled flat metric keeps signature zero") {
    dec::PeriodicGrid g(4, 4);
    std::vector<Eigen::MatrixXd> blocks(std::size_t(g.sites()),
                                        2.25 * Eigen::MatrixXd::Identity(4, 4));
    metrics::MetricField gm(g, std::move(blocks), 1.0, 10.0, false, "scaled");
    spectral::SignatureAssembly A(g, gm);
    CHECK(spectral::signature_pairing(A) == 0);
}

TEST_CASE("signature: refuses outside n = 4") {
    dec::PeriodicGrid g(2, 4);
    auto gm = metrics::flat_metric(g);
    spectral::SignatureAssembly A(g, gm);
    CHECK_THROWS_AS(spectral::signature_pairing(A), std::invalid_argument);
}
