#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>

#include "siglab/common/rng.hpp"
#include "siglab/metrics/exponents.hpp"
#include "siglab/metrics/io.hpp"
#include "siglab/metrics/metric_field.hpp"
#include "siglab/metrics/spd.hpp"

using namespace siglab;

TEST_CASE("flat metric: identity blocks, reference ledger") {
    dec::PeriodicGrid g(2, 8);
    auto gm = metrics::flat_metric(g);
    CHECK(gm.is_flat());
    CHECK(gm.lower_bound() == 1.0);
    CHECK((gm.at(17) - Eigen::MatrixXd::Identity(2, 2)).norm() == 0.0);
    auto l = metrics::flat_ledger(2);
    CHECK(l.p_m == 2.0);
    CHECK(l.q_m1 == 2.0);
    CHECK(metrics::n_of_g(l) == doctest::Approx(2.0));
}

TEST_CASE("conformal singular metric: admissibility window") {
    dec::PeriodicGrid g(3, 8);
    // beta p < n accepted
    CHECK_NOTHROW(metrics::conformal_singular_metric(g, {0.5, 0.5, 0.5, 0}, 0.4, 1.0, 7.0));
    // beta p >= n rejected
    CHECK_THROWS_AS(
        metrics::conformal_singular_metric(g, {0.5, 0.5, 0.5, 0}, 0.5, 1.0, 6.5),
        std::invalid_argument);
    CHECK_THROWS_AS(metrics::conformal_singular_metric(g, {0.5, 0.5, 0.5, 0}, -0.1, 1.0),
                    std::invalid_argument);
}

TEST_CASE("conformal singular metric: beta = 0 gives the constant floor") {
    dec::PeriodicGrid g(2, 8);
    auto gm = metrics::conformal_singular_metric(g, {0.5, 0.5, 0, 0}, 0.0, 1.25);
    for (std::int64_t s = 0; s < g.sites(); ++s)
        CHECK((gm.at(s) - 1.25 * Eigen::MatrixXd::Identity(2, 2)).norm() == 0.0);
}

TEST_CASE("conformal singular metric: floor and clamp") {
    dec::PeriodicGrid g(2, 8);
    auto gm = metrics::conformal_singular_metric(g, {0.25, 0.25, 0, 0}, 0.5, 1.5, 2.0);
    // far from the center the floor rules
    double minv = 1e300, maxv = 0;
    for (std::int64_t s = 0; s < g.sites(); ++s) {
        minv = std::min(minv, gm.at(s)(0, 0));
        maxv = std::max(maxv, gm.at(s)(0, 0));
    }
    CHECK(minv == doctest::Approx(1.5));
    // the clamp bounds the peak at the h/2 profile value
    CHECK(maxv <= std::pow(g.h() / 2, -0.5) * (1 + 1e-12));
    CHECK(maxv > 1.5);
}

TEST_CASE("metric from transitions: closed forms and PSD excess") {
    dec::PeriodicGrid g(2, 6);
    SUBCASE("all psi = 0 gives the identity") {
        metrics::TransitionData td;
        metrics::TransitionData::Field f;
        f.psi.assign(std::size_t(g.sites()), Eigen::MatrixXd::Zero(2, 2));
        td.fields.push_back(f);
        auto gm = metrics::metric_from_transitions(g, td);
        CHECK((gm.at(7) - Eigen::MatrixXd::Identity(2, 2)).norm() == 0.0);
    }
    SUBCASE("psi = c Id gives (1 + c^2) Id") {
        metrics::TransitionData td;
        metrics::TransitionData::Field f;
        f.psi.assign(std::size_t(g.sites()), 1.5 * Eigen::MatrixXd::Identity(2, 2));
        td.fields.push_back(f);
        auto gm = metrics::metric_from_transitions(g, td);
        CHECK((gm.at(0) - 3.25 * Eigen::MatrixXd::Identity(2, 2)).norm() <= 1e-14);
    }
    SUBCASE("random psi: A - Id is PSD everywhere") {
        SplitMix64 rng(1);
        metrics::TransitionData td;
        metrics::TransitionData::Field f;
        for (std::int64_t s = 0; s < g.sites(); ++s) {
            Eigen::MatrixXd psi(2, 2);
            for (int i = 0; i < 4; ++i) psi(i / 2, i % 2) = rng.symmetric();
            f.psi.push_back(psi);
        }
        td.fields.push_back(f);
        auto gm = metrics::metric_from_transitions(g, td);
        for (std::int64_t s = 0; s < g.sites(); ++s) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
                Eigen::MatrixXd(gm.at(s) - Eigen::MatrixXd::Identity(2, 2)),
                Eigen::EigenvaluesOnly);
            CHECK(es.eigenvalues().minCoeff() >= -1e-14);
        }
    }
}

TEST_CASE("random rough metric: determinism and integrability scaling") {
    dec::PeriodicGrid g16(2, 16), g32(2, 32);
    const double p = 4.0;
    auto a = metrics::random_rough_metric(g16, p, 2024);
    auto b = metrics::random_rough_metric(g16, p, 2024);
    for (std::int64_t s = 0; s < g16.sites(); ++s)
        CHECK((a.at(s) - b.at(s)).norm() == 0.0);

    auto c = metrics::random_rough_metric(g32, p, 2024);
    // L^p sample norm stable, L^{2p} sample norm divergent under refinement
    const double lp16 = std::pow(a.empirical_lp_norm(p), p);
    const double lp32 = std::pow(c.empirical_lp_norm(p), p);
    CHECK(std::abs(lp32 - lp16) / lp16 <= 0.10);
    const double l2p16 = std::pow(a.empirical_lp_norm(2 * p), 2 * p);
    const double l2p32 = std::pow(c.empirical_lp_norm(2 * p), 2 * p);
    CHECK(l2p32 / l2p16 >= 2.0);
}

TEST_CASE("n_of_g: printed formula values") {
    auto l = metrics::flat_ledger(3);
    CHECK(metrics::n_of_g(l) == doctest::Approx(3.0));

    auto qc = metrics::exponents_quasiconformal(3, 6.0);
    CHECK(qc.p_m == doctest::Approx(2.4));
    CHECK(qc.q_m1 == doctest::Approx(12.0 / 7.0));
    CHECK(metrics::n_of_g(qc) == doctest::Approx(6.0).epsilon(1e-12));
    // Lemma-style exponent with p^{-1} + N^{-1} = q^{-1}: n0 = nN/(N-n)
    CHECK(metrics::n0_exponent(3, 6.0) == doctest::Approx(6.0));

    metrics::ExponentLedger bad = metrics::flat_ledger(3);
    bad.p_m = 4.0;
    bad.q_m1 = 1.0;  // denominator 4 - 3 * 3 < 0
    CHECK_THROWS_AS(metrics::n_of_g(bad), std::invalid_argument);
}

TEST_CASE("quasiconformal exponents: both parities") {
    SUBCASE("odd n: smooth limit") {
        auto l = metrics::exponents_quasiconformal(3, 1e9);
        CHECK(l.p_m == doctest::Approx(2.0));
        CHECK(l.q_m1 == doctest::Approx(2.0));
        CHECK(metrics::n_of_g(l) == doctest::Approx(3.0).epsilon(1e-6));
    }
    SUBCASE("even n = 4, p = 8") {
        auto l = metrics::exponents_quasiconformal(4, 8.0);
        CHECK(l.q_m1 == doctest::Approx(1.6));
        CHECK(metrics::quasiconformal_p_mminus1(8.0) == doctest::Approx(8.0 / 3.0));
    }
    SUBCASE("p <= n rejected") {
        CHECK_THROWS_AS(metrics::exponents_quasiconformal(3, 3.0), std::invalid_argument);
    }
}

TEST_CASE("lp-derivable exponents: printed formulas and threshold") {
    SUBCASE("n = 3, p = 7") {
        auto l = metrics::exponents_lp_derivable(3, 7.0);
        CHECK(l.p_m == doctest::Approx(2.8));
        CHECK(l.q_m1 == doctest::Approx(14.0 / 9.0));
        // admissibility chain: 5/14 + 1/3 > 9/14
        CHECK(1.0 / l.p_m + 1.0 / 3.0 > 1.0 / l.q_m1);
        CHECK(metrics::n_of_g(l) == doctest::Approx(21.0).epsilon(1e-12));
    }
    SUBCASE("n = 3, p = 6 rejected at the threshold") {
        CHECK_THROWS_WITH_AS(metrics::exponents_lp_derivable(3, 6.0),
                             doctest::Contains("p > n(n+1)/2 violated"),
                             std::invalid_argument);
    }
    SUBCASE("n = 2, p = 4 accepted with p_m = 8/3") {
        auto l = metrics::exponents_lp_derivable(2, 4.0);
        CHECK(l.p_m == doctest::Approx(8.0 / 3.0));
    }
    SUBCASE("boundary exact for n = 2, 3, 4") {
        for (int n : {2, 3, 4}) {
            const double thr = n * (n + 1.0) / 2.0;
            CHECK_THROWS(metrics::exponents_lp_derivable(n, thr));
            CHECK_NOTHROW(metrics::exponents_lp_derivable(n, thr + 1e-12));
        }
    }
}

TEST_CASE("interpolate_exponents: printed formula, verbatim orientation") {
    auto mk = [](double pm) {
        metrics::ExponentLedger l = metrics::flat_ledger(3);
        l.p_m = pm;
        return l;
    };
    auto L0 = mk(2.0), L1 = mk(4.0);
    // 1/p(1/2) = (1/2)(1/2) + (1/2)(1/4) = 3/8
    auto Lh = metrics::interpolate_exponents(L0, L1, 0.5);
    CHECK(Lh.p_m == doctest::Approx(8.0 / 3.0).epsilon(1e-14));
    // t on L0's reciprocal: endpoints verbatim
    CHECK(metrics::interpolate_exponents(L0, L1, 1.0).p_m == 2.0);
    CHECK(metrics::interpolate_exponents(L0, L1, 0.0).p_m == 4.0);
    // constant path
    auto Lc = metrics::interpolate_exponents(L0, L0, 0.37);
    CHECK(Lc.p_m == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("geometric mean: endpoints, commuting case, Riccati oracle") {
    SplitMix64 rng(5150);
    auto rnd_spd = [&](int d) {
        Eigen::MatrixXd Q(d, d);
        for (int i = 0; i < d * d; ++i) Q(i / d, i % d) = rng.symmetric();
        return Eigen::MatrixXd(0.4 * Eigen::MatrixXd::Identity(d, d) + Q * Q.transpose());
    };
    SUBCASE("endpoints verbatim") {
        auto A0 = rnd_spd(3), A1 = rnd_spd(3);
        CHECK((metrics::geometric_mean(A0, A1, 0.0) - A0).norm() == 0.0);
        CHECK((metrics::geometric_mean(A0, A1, 1.0) - A1).norm() == 0.0);
    }
    SUBCASE("commuting diagonal: entrywise geometric mean") {
        Eigen::MatrixXd A0 = Eigen::MatrixXd::Identity(2, 2);
        Eigen::MatrixXd A1 = (Eigen::MatrixXd(2, 2) << 4, 0, 0, 9).finished();
        Eigen::MatrixXd Ah = metrics::geometric_mean(A0, A1, 0.5);
        CHECK(Ah(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(Ah(1, 1) == doctest::Approx(3.0).epsilon(1e-12));
    }
    SUBCASE("midpoint satisfies the Riccati characterization G A0^{-1} G = A1") {
        // independent of the eigendecomposition route inside geometric_mean
        for (int trial = 0; trial < 20; ++trial) {
            auto A0 = rnd_spd(3), A1 = rnd_spd(3);
            Eigen::MatrixXd G = metrics::geometric_mean(A0, A1, 0.5);
            CHECK((G * A0.inverse() * G - A1).norm() <= 1e-10 * A1.norm());
        }
    }
    SUBCASE("non-SPD input rejected") {
        Eigen::MatrixXd bad = (Eigen::MatrixXd(2, 2) << 1, 2, 2, 1).finished();
        CHECK_THROWS_AS(metrics::geometric_mean(bad, Eigen::MatrixXd::Identity(2, 2), 0.5),
                        std::invalid_argument);
    }
}

TEST_CASE("interpolate_metrics: endpoints exact, floor and p_int laws") {
    dec::PeriodicGrid g(2, 6);
    auto g0 = metrics::flat_metric(g);
    auto g1 = metrics::conformal_singular_metric(g, {0.25, 0.5, 0, 0}, 0.5, 1.2, 2.5);
    auto at0 = metrics::interpolate_metrics(g0, g1, 0.0);
    auto at1 = metrics::interpolate_metrics(g0, g1, 1.0);
    for (std::int64_t s = 0; s < g.sites(); ++s) {
        CHECK((at0.at(s) - g0.at(s)).norm() == 0.0);
        CHECK((at1.at(s) - g1.at(s)).norm() == 0.0);
    }
    auto mid = metrics::interpolate_metrics(g0, g1, 0.5);
    CHECK(mid.lower_bound() == doctest::Approx(std::sqrt(1.2)));
    CHECK(1.0 / mid.p_int() == doctest::Approx(0.5 / 2.0 + 0.5 / 2.5));
}

TEST_CASE("metric serialization: binary and JSON round trips") {
    dec::PeriodicGrid g(2, 6);
    auto gm = metrics::random_rough_metric(g, 3.0, 777);
    const auto tmp = std::filesystem::temp_directory_path() / "siglab_metric_test.bin";
    metrics::save_metric_binary(gm, tmp.string());
    auto back = metrics::load_metric_binary(g, tmp.string());
    for (std::int64_t s = 0; s < g.sites(); ++s)
        CHECK((back.at(s) - gm.at(s)).norm() == 0.0);
    CHECK(back.lower_bound() == gm.lower_bound());
    CHECK(back.p_int() == gm.p_int());
    std::filesystem::remove(tmp);

    auto viajson = metrics::metric_from_json(g, metrics::metric_to_json(gm));
    for (std::int64_t s = 0; s < g.sites(); ++s)
        CHECK((viajson.at(s) - gm.at(s)).norm() <= 1e-15 * gm.at(s).norm());
}
