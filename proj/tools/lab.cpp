// lab: experiment driver for the rough-metric signature laboratory.
//
// Subcommands: spectrum | decay | homotopy | exponents | signature | verify.
// Configuration is a single JSON document (docs/formats.md); every run writes
// a manifest listing its inputs, outputs and verdicts.  Exit codes: 0 success,
// 1 operational error, 2 verdict failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "siglab/common/rng.hpp"
#include "siglab/dec/coboundary.hpp"
#include "siglab/dec/pairing.hpp"
#include "siglab/dec/star.hpp"
#include "siglab/metrics/exponents.hpp"
#include "siglab/metrics/io.hpp"
#include "siglab/metrics/metric_field.hpp"
#include "siglab/metrics/spd.hpp"
#include "siglab/spectral/analysis.hpp"
#include "siglab/spectral/homotopy.hpp"
#include "siglab/spectral/parametrix.hpp"
#include "siglab/spectral/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace siglab;

namespace {

constexpr const char* kVersion = "siglab 0.1.0";

// ---------------------------------------------------------------------------
// small utilities

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void atomic_write(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open " + tmp.string());
        os << content;
        if (!os) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

struct Manifest {
    std::string config_hash;
    json config;
    std::vector<std::string> artifacts;
    json verdicts = json::object();
    std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

    void write(const fs::path& dir) const {
        json j;
        j["tool"] = kVersion;
        j["config_hash"] = config_hash;
        j["config"] = config;
        j["wall_ms"] = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - started)
                           .count();
        j["artifacts"] = artifacts;
        j["verdicts"] = verdicts;
        atomic_write(dir / "manifest.json", j.dump(2) + "\n");
    }
};

// ---------------------------------------------------------------------------
// configuration

struct Config {
    json raw;
    int n = 2;
    std::vector<int> Ns;
    json metric, metric2, ledger;
    int count = 200;
    int steps = 11;
    double window_lo = 0.2, window_hi = 0.7;
    spectral::SolverOptions solver;
    bool synthetic_oracle = false;
    std::uint64_t seed = 1;
    std::string out = "results";
};

Config parse_config(const std::string& path, std::uint64_t seed_override,
                    const std::string& out_override) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("config: cannot open " + path);
    json j;
    try {
        j = json::parse(is);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("config: " + std::string(e.what()));
    }
    Config c;
    c.raw = j;
    if (!j.contains("n")) throw std::runtime_error("config: missing field \"n\"");
    c.n = j.at("n").get<int>();
    if (c.n < 1 || c.n > 4) throw std::runtime_error("config: n must be in [1,4]");
    if (!j.contains("N")) throw std::runtime_error("config: missing field \"N\"");
    if (j.at("N").is_array())
        c.Ns = j.at("N").get<std::vector<int>>();
    else
        c.Ns = {j.at("N").get<int>()};
    for (int N : c.Ns)
        if (N < 4) throw std::runtime_error("config: N must be >= 4");
    c.metric = j.value("metric", json{{"kind", "flat"}});
    c.metric2 = j.value("metric2", json());
    c.ledger = j.value("ledger", json{{"source", "flat"}});
    c.count = j.value("count", 200);
    c.steps = j.value("steps", 11);
    if (j.contains("fit_window")) {
        c.window_lo = j.at("fit_window").at(0).get<double>();
        c.window_hi = j.at("fit_window").at(1).get<double>();
    }
    c.synthetic_oracle = j.value("synthetic_oracle", false);
    c.seed = j.value("seed", std::uint64_t(1));
    if (seed_override) c.seed = seed_override;
    c.out = out_override.empty() ? j.value("out", std::string("results")) : out_override;
    if (j.contains("solver")) {
        const auto& s = j.at("solver");
        const std::string mode = s.value("mode", "auto");
        if (mode == "dense")
            c.solver.mode = spectral::SolverOptions::Mode::Dense;
        else if (mode == "iterative")
            c.solver.mode = spectral::SolverOptions::Mode::Iterative;
        else if (mode != "auto")
            throw std::runtime_error("config: solver.mode must be auto|dense|iterative");
        c.solver.tol = s.value("tol", 1e-10);
        c.solver.max_iter = s.value("max_iter", 0);
    }
    c.solver.seed = c.seed;
    return c;
}

metrics::MetricField build_metric(const dec::PeriodicGrid& grid, const json& spec,
                                  std::uint64_t seed) {
    const std::string kind = spec.value("kind", "flat");
    if (kind == "flat") return metrics::flat_metric(grid);
    if (kind == "conformal") {
        std::array<double, 4> center{0.5, 0.5, 0.5, 0.5};
        if (spec.contains("center"))
            for (std::size_t i = 0; i < spec.at("center").size() && i < 4; ++i)
                center[i] = spec.at("center").at(i).get<double>();
        return metrics::conformal_singular_metric(grid, center, spec.value("beta", 0.5),
                                                  spec.value("B", 1.0),
                                                  spec.value("p_int", -1.0));
    }
    if (kind == "random")
        return metrics::random_rough_metric(grid, spec.value("p_int", 5.0),
                                            spec.value("seed", seed));
    if (kind == "transitions") {
        // synthetic transition fields: smooth sines scaled by `scale`
        const double scale = spec.value("scale", 1.0);
        metrics::TransitionData td;
        metrics::TransitionData::Field f;
        f.psi.reserve(std::size_t(grid.sites()));
        for (std::int64_t s = 0; s < grid.sites(); ++s) {
            const auto x = grid.position(s);
            Eigen::MatrixXd psi = Eigen::MatrixXd::Zero(grid.n(), grid.n());
            for (int i = 0; i < grid.n(); ++i)
                for (int jj = 0; jj < grid.n(); ++jj)
                    psi(i, jj) = scale * std::sin(2 * M_PI * (x[i] + 0.25 * jj));
            f.psi.push_back(std::move(psi));
        }
        td.fields.push_back(std::move(f));
        return metrics::metric_from_transitions(grid, td);
    }
    if (kind == "file")
        return metrics::load_metric_binary(grid, spec.at("path").get<std::string>());
    throw std::runtime_error(
        "config: metric.kind must be flat|conformal|random|transitions|file");
}

metrics::ExponentLedger build_ledger(int n, const json& spec) {
    const std::string source = spec.value("source", "flat");
    if (source == "flat") return metrics::flat_ledger(n);
    if (source == "quasiconformal")
        return metrics::exponents_quasiconformal(n, spec.at("p").get<double>());
    if (source == "lp_derivable")
        return metrics::exponents_lp_derivable(n, spec.at("p").get<double>());
    if (source == "explicit") {
        metrics::ExponentLedger l;
        l.n = n;
        l.p_m = spec.at("p_m").get<double>();
        l.q_m = spec.at("q_m").get<double>();
        l.p_m1 = spec.at("p_m1").get<double>();
        l.q_m1 = spec.at("q_m1").get<double>();
        l.B = spec.value("B", 1.0 + 1e-6);
        l.validate();
        return l;
    }
    throw std::runtime_error(
        "config: ledger.source must be flat|quasiconformal|lp_derivable|explicit");
}

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// ---------------------------------------------------------------------------
// subcommands

int cmd_spectrum(const Config& cfg, bool to_json_stdout) {
    fs::create_directories(cfg.out);
    Manifest man;
    man.config = cfg.raw;
    man.config_hash = hex64(fnv1a64(cfg.raw.dump()));

    const dec::PeriodicGrid grid(cfg.n, cfg.Ns.front());
    const metrics::MetricField g = build_metric(grid, cfg.metric, cfg.seed);
    const metrics::ExponentLedger ledger = build_ledger(cfg.n, cfg.ledger);
    spectral::SignatureAssembly assembly(grid, g);
    spectral::SpectralReport rep =
        spectral::singular_values(assembly, cfg.count, cfg.solver, &ledger);

    atomic_write(fs::path(cfg.out) / "report.json", rep.to_json() + "\n");
    atomic_write(fs::path(cfg.out) / "spectrum.csv", rep.to_csv());
    man.artifacts = {"report.json", "spectrum.csv", "manifest.json"};
    const bool ok = rep.solver_converged && !rep.gap_ambiguous;
    man.verdicts["spectrum"] = ok ? "PASS" : "FAIL";
    man.write(cfg.out);
    if (to_json_stdout)
        std::cout << rep.to_json() << "\n";
    else
        std::cout << "spectrum: n=" << rep.n << " N=" << rep.N
                  << " kernel_dim=" << rep.kernel_dim << " ("
                  << (ok ? "PASS" : "FAIL") << ")\n";
    return ok ? 0 : 2;
}

int cmd_decay(const Config& cfg, bool to_json_stdout) {
    if (cfg.Ns.size() < 2 && !cfg.synthetic_oracle)
        throw std::runtime_error("decay: need at least two resolutions in \"N\"");
    fs::create_directories(cfg.out);
    Manifest man;
    man.config = cfg.raw;
    man.config_hash = hex64(fnv1a64(cfg.raw.dump()));

    const metrics::ExponentLedger ledger = build_ledger(cfg.n, cfg.ledger);
    const double n_g = metrics::n_of_g(ledger);
    json summary;
    summary["n_g"] = n_g;
    summary["bound"] = -1.0 / n_g;
    bool all_pass = true;

    if (cfg.synthetic_oracle) {
        // Oracle bypass: inject mu_j = j^{-1/n_g} and fit.
        std::vector<double> sv(std::size_t(cfg.count));
        for (int j = 0; j < cfg.count; ++j)
            sv[std::size_t(j)] = std::pow(double(j + 1), -1.0 / n_g);
        spectral::SpectralReport rep = spectral::report_from_values(sv, n_g);
        spectral::attach_decay_fit(rep, cfg.window_lo, cfg.window_hi);
        summary["synthetic"] = {{"slope", rep.slope},
                                {"expected", -1.0 / n_g},
                                {"slope_error", std::abs(rep.slope + 1.0 / n_g)},
                                {"pass", rep.decay_pass}};
        all_pass = rep.decay_pass;
    } else {
        json table = json::array();
        for (std::size_t i = 0; i < cfg.Ns.size(); ++i) {
            const int N = cfg.Ns[i];
            try {
                const dec::PeriodicGrid grid(cfg.n, N);
                const metrics::MetricField g = build_metric(grid, cfg.metric, cfg.seed);
                spectral::SignatureAssembly assembly(grid, g);
                const int count = int(std::min<std::int64_t>(
                    cfg.count, grid.dofs(grid.middle_degree()) / 2));
                spectral::SpectralReport rep =
                    spectral::singular_values(assembly, count, cfg.solver, &ledger);
                spectral::attach_decay_fit(rep, cfg.window_lo, cfg.window_hi);
                std::ostringstream name;
                name << "decay_N" << N << ".csv";
                atomic_write(fs::path(cfg.out) / name.str(), rep.to_csv());
                man.artifacts.push_back(name.str());
                table.push_back({{"N", N},
                                 {"slope", rep.slope},
                                 {"band", rep.slope_band},
                                 {"kernel_dim", rep.kernel_dim},
                                 {"pass", rep.decay_pass}});
                all_pass = all_pass && rep.decay_pass && rep.solver_converged;
            } catch (const std::exception& e) {
                // abort, but leave the partial manifest behind
                man.artifacts.push_back("manifest.json");
                man.verdicts["decay"] =
                    std::string("ABORTED at N = ") + std::to_string(N) + ": " + e.what();
                summary["table"] = table;
                man.write(cfg.out);
                throw;
            }
        }
        summary["table"] = table;
    }
    summary["verdict"] = all_pass ? "PASS" : "FAIL";
    atomic_write(fs::path(cfg.out) / "summary.json", summary.dump(2) + "\n");
    man.artifacts.push_back("summary.json");
    man.artifacts.push_back("manifest.json");
    man.verdicts["decay"] = all_pass ? "PASS" : "FAIL";
    man.write(cfg.out);
    if (to_json_stdout)
        std::cout << summary.dump(2) << "\n";
    else
        std::cout << "decay: " << summary["verdict"].get<std::string>() << "\n";
    return all_pass ? 0 : 2;
}

int cmd_homotopy(const Config& cfg, bool to_json_stdout) {
    if (cfg.metric2.is_null())
        throw std::runtime_error("homotopy: config must provide \"metric2\"");
    fs::create_directories(cfg.out);
    Manifest man;
    man.config = cfg.raw;
    man.config_hash = hex64(fnv1a64(cfg.raw.dump()));

    const dec::PeriodicGrid grid(cfg.n, cfg.Ns.front());
    const metrics::MetricField g0 = build_metric(grid, cfg.metric, cfg.seed);
    const metrics::MetricField g1 = build_metric(grid, cfg.metric2, cfg.seed + 1);
    const metrics::ExponentLedger L0 = build_ledger(cfg.n, cfg.ledger);
    const metrics::ExponentLedger L1 =
        cfg.raw.contains("ledger2") ? build_ledger(cfg.n, cfg.raw.at("ledger2")) : L0;

    spectral::HomotopyResult res = spectral::homotopy_run(
        g0, g1, L0, L1, cfg.steps, cfg.count, cfg.window_lo, cfg.window_hi, cfg.solver);

    std::ostringstream csv;
    csv << "t,n_g,kernel_dim";
    const std::size_t k = res.steps.front().sv.size();
    for (std::size_t j = 0; j < k; ++j) csv << ",mu_" << (j + 1);
    csv << "\n";
    for (const auto& st : res.steps) {
        csv << fmt17(st.t) << "," << fmt17(st.n_g) << "," << st.kernel_dim;
        for (double v : st.sv) csv << "," << fmt17(v);
        csv << "\n";
    }
    atomic_write(fs::path(cfg.out) / "path.csv", csv.str());

    json verdict;
    verdict["pass"] = res.pass;
    verdict["kernel_constant"] = res.kernel_constant;
    verdict["max_rel_jump"] = res.max_rel_jump;
    verdict["offending_t"] = res.offending_t;
    verdict["verdict"] = res.verdict;
    atomic_write(fs::path(cfg.out) / "verdict.json", verdict.dump(2) + "\n");
    man.artifacts = {"path.csv", "verdict.json", "manifest.json"};
    man.verdicts["homotopy"] = res.pass ? "PASS" : "FAIL";
    man.write(cfg.out);
    if (to_json_stdout)
        std::cout << verdict.dump(2) << "\n";
    else
        std::cout << "homotopy: " << res.verdict << "\n";
    return res.pass ? 0 : 2;
}

int cmd_exponents(const std::string& kind, int n, double p, const std::string& out,
                  bool to_json_stdout) {
    json j;
    j["kind"] = kind;
    j["n"] = n;
    j["p"] = p;
    const double threshold = kind == "lp" ? n * (n + 1.0) / 2.0 : double(n);
    j["threshold"] = threshold;
    j["threshold_distance"] = p - threshold;
    bool admissible = true;
    try {
        metrics::ExponentLedger l = kind == "lp"
                                        ? metrics::exponents_lp_derivable(n, p)
                                        : metrics::exponents_quasiconformal(n, p);
        j["p_m"] = l.p_m;
        j["q_m"] = l.q_m;
        j["p_m1"] = l.p_m1;
        j["q_m1"] = l.q_m1;
        j["n_g"] = metrics::n_of_g(l);
        if (kind == "qc" && n % 2 == 0 && p > 2)
            j["p_mminus1"] = metrics::quasiconformal_p_mminus1(p);
    } catch (const std::invalid_argument& e) {
        admissible = false;
        j["violated"] = e.what();
    }
    j["admissible"] = admissible;
    if (!out.empty()) {
        fs::create_directories(out);
        atomic_write(fs::path(out) / "exponents.json", j.dump(2) + "\n");
    }
    if (to_json_stdout) {
        std::cout << j.dump(2) << "\n";
    } else if (!admissible) {
        std::cout << "inadmissible: " << j["violated"].get<std::string>() << "\n";
    } else {
        std::printf("structure: %s  n=%d  p=%g\n", kind.c_str(), n, p);
        std::printf("  p_m     = %.10g\n", j["p_m"].get<double>());
        std::printf("  q_m     = %.10g\n", j["q_m"].get<double>());
        std::printf("  p_{m+1} = %.10g\n", j["p_m1"].get<double>());
        std::printf("  q_{m+1} = %.10g\n", j["q_m1"].get<double>());
        std::printf("  n(g)    = %.10g\n", j["n_g"].get<double>());
        std::printf("  admissible; distance to threshold %.10g: %+.10g\n", threshold,
                    p - threshold);
    }
    return admissible ? 0 : 2;
}

int cmd_signature(const Config& cfg, bool to_json_stdout) {
    fs::create_directories(cfg.out);
    Manifest man;
    man.config = cfg.raw;
    man.config_hash = hex64(fnv1a64(cfg.raw.dump()));

    const dec::PeriodicGrid grid(cfg.n, cfg.Ns.front());
    const metrics::MetricField g = build_metric(grid, cfg.metric, cfg.seed);
    spectral::SignatureAssembly assembly(grid, g);
    json j;
    int rc = 0;
    try {
        const int sig = spectral::signature_pairing(assembly, cfg.solver);
        j["signature"] = sig;
        man.verdicts["signature"] = "PASS";
    } catch (const std::exception& e) {
        j["error"] = e.what();
        man.verdicts["signature"] = "FAIL";
        rc = 2;
    }
    atomic_write(fs::path(cfg.out) / "signature.json", j.dump(2) + "\n");
    man.artifacts = {"signature.json", "manifest.json"};
    man.write(cfg.out);
    if (to_json_stdout)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << "signature: " << j.dump() << "\n";
    return rc;
}

// ---------------------------------------------------------------------------
// verification suite

struct VerifyContext {
    json results = json::array();
    bool all_pass = true;

    void check(const std::string& name, bool pass, double value, double limit) {
        results.push_back(
            {{"name", name}, {"pass", pass}, {"value", value}, {"limit", limit}});
        all_pass = all_pass && pass;
        std::printf("  [%s] %-58s %.3e (limit %.1e)\n", pass ? "PASS" : "FAIL",
                    name.c_str(), value, limit);
    }
};

void verify_dec_algebra(VerifyContext& vc) {
    for (int n : {1, 2, 3}) {
        for (int N : {8, 16}) {
            if (n == 3 && N == 16) continue;  // covered at N=8; keeps the suite fast
            dec::PeriodicGrid grid(n, N);
            auto gm = metrics::random_rough_metric(grid, 4.0, 101 + n);
            std::ostringstream tag;
            tag << " (n=" << n << ", N=" << N << ")";

            double dd = 0, tausq = 0, iso = 0, dual = 0, spd_min = 1e300;
            for (int k = 0; k <= n; ++k) {
                auto w = dec::random_form(grid, k, 7 * n + k);
                if (k + 2 <= n) {
                    auto dw = dec::coboundary(grid, w);
                    auto ddw = dec::coboundary(grid, dw);
                    dd = std::max(dd, ddw.data.norm() / (dw.data.norm() + 1.0));
                }
                auto tw = dec::tau(grid, gm, w);
                auto ttw = dec::tau(grid, gm, tw);
                tausq = std::max(tausq, (ttw.data - w.data).norm() / w.data.norm());
                dec::MassMatrix Mk(grid, gm, k), Mnk(grid, gm, n - k);
                iso = std::max(iso, std::abs(Mnk.norm(tw) - Mk.norm(w)) / Mk.norm(w));
                auto a = dec::random_form(grid, k, 900 + k);
                const auto ip = Mk.inner(a, w);
                const auto wg = dec::wedge_integral(grid, a, tw);
                dual = std::max(dual, std::abs(wg - dec::duality_phase(n, k) * ip) /
                                          std::max(1e-300, std::abs(ip)));
                for (std::int64_t s = 0; s < grid.sites(); ++s) {
                    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
                        Mk.block(s), Eigen::EigenvaluesOnly);
                    spd_min = std::min(spd_min, es.eigenvalues().minCoeff());
                }
            }
            vc.check("dec: d(d(w)) = 0" + tag.str(), dd <= 1e-13, dd, 1e-13);
            vc.check("dec: tau(tau(w)) = w" + tag.str(), tausq <= 1e-10, tausq, 1e-10);
            vc.check("dec: ||tau w|| = ||w||" + tag.str(), iso <= 1e-10, iso, 1e-10);
            vc.check("dec: wedge(a, tau b) duality" + tag.str(), dual <= 1e-10, dual,
                     1e-10);
            vc.check("dec: mass blocks SPD" + tag.str(), spd_min > 0, spd_min, 0);
        }
    }
}

void verify_metrics(VerifyContext& vc) {
    SplitMix64 rng(424242);
    {
        dec::PeriodicGrid grid(2, 8);
        metrics::TransitionData td;
        metrics::TransitionData::Field f;
        for (std::int64_t s = 0; s < grid.sites(); ++s) {
            Eigen::MatrixXd psi(2, 2);
            for (int i = 0; i < 4; ++i) psi(i / 2, i % 2) = rng.symmetric();
            f.psi.push_back(psi);
        }
        td.fields.push_back(f);
        auto gm = metrics::metric_from_transitions(grid, td);
        double mineig = 1e300;
        for (std::int64_t s = 0; s < grid.sites(); ++s) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gm.at(s),
                                                              Eigen::EigenvaluesOnly);
            mineig = std::min(mineig, es.eigenvalues().minCoeff());
        }
        vc.check("metrics: transitions give A >= Id", mineig >= 1.0 - 1e-12, mineig,
                 1.0);
    }
    {
        double err = 0;
        for (int trial = 0; trial < 10; ++trial) {
            const int d = 2 + int(rng.next() % 2);
            auto rnd_spd = [&](double shift) {
                Eigen::MatrixXd Q(d, d);
                for (int i = 0; i < d * d; ++i) Q(i / d, i % d) = rng.symmetric();
                return Eigen::MatrixXd(shift * Eigen::MatrixXd::Identity(d, d) +
                                       Q * Q.transpose());
            };
            Eigen::MatrixXd A0 = rnd_spd(0.5), A1 = rnd_spd(0.3), Mx(d, d);
            for (int i = 0; i < d * d; ++i) Mx(i / d, i % d) = rng.symmetric();
            Mx += 3.0 * Eigen::MatrixXd::Identity(d, d);
            const double t = rng.uniform();
            Eigen::MatrixXd lhs = metrics::geometric_mean(
                Mx.transpose() * A0 * Mx, Mx.transpose() * A1 * Mx, t);
            Eigen::MatrixXd rhs =
                Mx.transpose() * metrics::geometric_mean(A0, A1, t) * Mx;
            err = std::max(err, (lhs - rhs).norm() / rhs.norm());
        }
        vc.check("metrics: geometric mean congruence covariance", err <= 1e-8, err,
                 1e-8);
    }
    {
        double viol = 0;
        for (int trial = 0; trial < 10; ++trial) {
            Eigen::Vector3d a, b;
            for (int i = 0; i < 3; ++i) {
                a[i] = 0.5 + rng.uniform();
                b[i] = a[i] + rng.uniform();
            }
            Eigen::MatrixXd A0 = a.asDiagonal(), A1 = b.asDiagonal();
            Eigen::MatrixXd prev = A0;
            for (double t : {0.25, 0.5, 0.75, 1.0}) {
                Eigen::MatrixXd At = metrics::geometric_mean(A0, A1, t);
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
                    Eigen::MatrixXd(At - prev), Eigen::EigenvaluesOnly);
                viol = std::max(viol, -es.eigenvalues().minCoeff());
                prev = At;
            }
        }
        vc.check("metrics: geometric mean Loewner-monotone in t", viol <= 1e-10, viol,
                 1e-10);
    }
    {
        bool ok = true;
        for (int n : {2, 3, 4}) {
            const double thr = n * (n + 1.0) / 2.0;
            try {
                metrics::exponents_lp_derivable(n, thr);
                ok = false;  // must reject at the boundary
            } catch (const std::invalid_argument&) {
            }
            try {
                metrics::exponents_lp_derivable(n, thr + 1e-9);
            } catch (const std::invalid_argument&) {
                ok = false;  // must accept just above
            }
        }
        vc.check("metrics: L^p threshold boundary at n(n+1)/2", ok, ok ? 0 : 1, 0);
    }
    {
        double err = 0;
        for (int trial = 0; trial < 20; ++trial) {
            const int n = (rng.next() % 2) ? 1 : 3;
            const double p = n + 0.5 + 10.0 * rng.uniform();
            auto l = metrics::exponents_quasiconformal(n, p);
            err = std::max(err, std::abs(metrics::n_of_g(l) - n * p / (p - n)) /
                                    (n * p / (p - n)));
        }
        vc.check("metrics: n(g) = np/(p-n) for odd quasiconformal", err <= 1e-12, err,
                 1e-12);
    }
}

void verify_spectral(VerifyContext& vc) {
    {
        dec::PeriodicGrid grid(2, 12);
        auto gm = metrics::random_rough_metric(grid, 4.0, 5);
        spectral::SignatureAssembly A(grid, gm);
        const double d = A.graded_selfadjoint_defect();
        vc.check("spectral: even graded ||MD - D^T M|| / ||MD||", d <= 1e-10, d, 1e-10);
    }
    {
        std::vector<double> defect;
        for (int N : {8, 16, 32}) {
            dec::PeriodicGrid grid(1, N);
            auto gm = metrics::flat_metric(grid);
            spectral::SignatureAssembly A(grid, gm);
            defect.push_back(A.smooth_probe_defect());
        }
        const double order =
            std::min(std::log2(defect[0] / defect[1]), std::log2(defect[1] / defect[2]));
        vc.check("spectral: odd literal tau d skew defect order >= 0.9", order >= 0.9,
                 order, 0.9);
    }
    {
        double worst = 0;
        for (int n : {2, 3}) {
            dec::PeriodicGrid grid(n, 8);
            for (int trial = 0; trial < 25; ++trial) {
                auto w = dec::random_form(grid, grid.middle_degree(), 1000 + trial);
                worst = std::max(worst, spectral::parametrix_identity_check(grid, w));
            }
        }
        vc.check("spectral: d t d w = d w (flat parametrix)", worst <= 1e-10, worst,
                 1e-10);
    }
    {
        bool ok = true;
        int worst_n = 0;
        for (int n : {1, 2, 3}) {
            const int N = n == 3 ? 8 : 16;
            dec::PeriodicGrid grid(n, N);
            for (int variant = 0; variant < 2; ++variant) {
                auto gm = variant == 0 ? metrics::flat_metric(grid)
                                       : metrics::conformal_singular_metric(
                                             grid, {0.3, 0.7, 0.2, 0}, 0.5, 1.0,
                                             0.8 * n);
                spectral::SignatureAssembly A(grid, gm);
                auto ka = spectral::kernel_analysis(A);
                if (ka.dim != ka.expected || !ka.finite_rank_check) {
                    ok = false;
                    worst_n = n;
                }
            }
        }
        vc.check("spectral: dim ker = C(n,m), rank(1-P-Q) consistent", ok,
                 ok ? 0 : worst_n, 0);
    }
    {
        bool ok = true;
        double worst = 0;
        for (int n : {2, 3}) {
            dec::PeriodicGrid grid(n, 16);
            auto gm = metrics::flat_metric(grid);
            spectral::SignatureAssembly A(grid, gm);
            auto rep = spectral::singular_values(A, n == 2 ? 180 : 300, {});
            spectral::attach_decay_fit(rep);
            ok = ok && rep.decay_pass && std::abs(rep.slope + 1.0 / n) <= 0.15;
            worst = std::max(worst, std::abs(rep.slope + 1.0 / n));
        }
        vc.check("spectral: flat decay slope within 0.15 of -1/n", ok, worst, 0.15);
    }
    {
        // odd-parity two-sided symmetry: nonzero spec(d*d | m) = spec(dd* | m+1),
        // the exact discrete form of the tau-conjugation argument
        dec::PeriodicGrid grid(3, 6);
        auto gm = metrics::random_rough_metric(grid, 4.0, 77);
        spectral::SignatureAssembly A(grid, gm);
        auto e1 = spectral::dense_generalized_eig(Eigen::MatrixXd(A.coexact_form()),
                                                  Eigen::MatrixXd(A.M_m().matrix()),
                                                  false);
        Eigen::MatrixXd W = Eigen::MatrixXd(A.M_mp1().matrix()) *
                            Eigen::MatrixXd(A.d_m()) *
                            Eigen::MatrixXd(A.M_m().inverse()) *
                            Eigen::MatrixXd(A.d_m()).transpose() *
                            Eigen::MatrixXd(A.M_mp1().matrix());
        W = 0.5 * (W + W.transpose()).eval();
        auto e2 = spectral::dense_generalized_eig(
            W, Eigen::MatrixXd(A.M_mp1().matrix()), false);
        std::vector<double> s1, s2;
        const double cut = 1e-8 * e1.lambda[e1.lambda.size() - 1];
        for (Eigen::Index i = 0; i < e1.lambda.size(); ++i)
            if (e1.lambda[i] > cut) s1.push_back(e1.lambda[i]);
        for (Eigen::Index i = 0; i < e2.lambda.size(); ++i)
            if (e2.lambda[i] > cut) s2.push_back(e2.lambda[i]);
        double err = std::abs(double(s1.size()) - double(s2.size()));
        if (err == 0)
            for (std::size_t i = 0; i < s1.size(); ++i)
                err = std::max(err, std::abs(s1[i] - s2[i]) / s1[i]);
        vc.check("spectral: odd +-spectrum symmetry (d*d vs dd*)", err <= 1e-9, err,
                 1e-9);
    }
    {
        dec::PeriodicGrid grid(2, 12);
        auto gm =
            metrics::conformal_singular_metric(grid, {0.25, 0.75, 0, 0}, 0.5, 1.0, 3.0);
        spectral::SignatureAssembly A(grid, gm);
        spectral::SolverOptions o;
        auto spD = spectral::middle_spectrum(A, o);
        o.mode = spectral::SolverOptions::Mode::Iterative;
        o.nev = 40;
        auto spI = spectral::middle_spectrum(A, o);
        double err = 0;
        for (int i = 0; i < 40; ++i)
            err = std::max(err, std::abs(spI.lambda[i] - spD.lambda[i]) /
                                    std::max(1.0, spD.lambda[i]));
        vc.check("spectral: dense vs shift-invert Lanczos overlap", err <= 1e-7, err,
                 1e-7);
    }
}

int cmd_verify(bool to_json_stdout, bool perturb_star) {
    dec::set_star_perturbation(perturb_star);
    VerifyContext vc;
    std::printf("verification suite (%s)%s\n", kVersion,
                perturb_star ? " [fault injection: --perturb-star]" : "");
    verify_dec_algebra(vc);
    verify_metrics(vc);
    verify_spectral(vc);
    dec::set_star_perturbation(false);
    if (to_json_stdout) {
        json j;
        j["results"] = vc.results;
        j["all_pass"] = vc.all_pass;
        std::cout << j.dump(2) << "\n";
    } else {
        std::printf("verify: %s\n", vc.all_pass ? "ALL PASS" : "FAILURES PRESENT");
    }
    return vc.all_pass ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    // LAB_THREADS caps BLAS parallelism; must be set before the first BLAS call.
    if (const char* t = std::getenv("LAB_THREADS")) {
        setenv("OPENBLAS_NUM_THREADS", t, 0);
        setenv("OMP_NUM_THREADS", t, 0);
    }

    CLI::App app{"signature-operator laboratory on flat tori with rough metrics"};
    app.require_subcommand(1);
    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    bool json_out = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON experiment config")->required();
        sub->add_option("--out", out_dir, "output directory (overrides config)");
        sub->add_option("--seed", seed, "seed override");
        sub->add_flag("--json", json_out, "machine-readable stdout");
    };

    auto* sp = app.add_subcommand("spectrum", "assemble and solve one spectrum");
    add_common(sp);
    auto* dc = app.add_subcommand("decay", "weak-Schatten decay across resolutions");
    add_common(dc);
    auto* hm = app.add_subcommand("homotopy", "metric homotopy invariance run");
    add_common(hm);
    auto* sg = app.add_subcommand("signature", "harmonic intersection-form signature");
    add_common(sg);

    auto* ex = app.add_subcommand("exponents", "exponent ledger calculator");
    std::string ex_kind;
    int ex_n = 3;
    double ex_p = 0;
    ex->add_option("kind", ex_kind, "structure kind: qc | lp")->required();
    ex->add_option("n", ex_n, "dimension")->required();
    ex->add_option("p", ex_p, "integrability exponent")->required();
    ex->add_option("--out", out_dir, "output directory");
    ex->add_flag("--json", json_out, "machine-readable stdout");

    auto* vf = app.add_subcommand("verify", "one-shot cross-module invariant suite");
    bool perturb = false;
    vf->add_flag("--json", json_out, "machine-readable stdout");
    vf->add_flag("--perturb-star", perturb, "fault injection: flip a star sign");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(ex)) {
            if (ex_kind != "qc" && ex_kind != "lp")
                throw std::runtime_error("exponents: kind must be qc or lp");
            return cmd_exponents(ex_kind, ex_n, ex_p, out_dir, json_out);
        }
        if (app.got_subcommand(vf)) return cmd_verify(json_out, perturb);
        Config cfg = parse_config(config_path, seed, out_dir);
        if (app.got_subcommand(sp)) return cmd_spectrum(cfg, json_out);
        if (app.got_subcommand(dc)) return cmd_decay(cfg, json_out);
        if (app.got_subcommand(hm)) return cmd_homotopy(cfg, json_out);
        if (app.got_subcommand(sg)) return cmd_signature(cfg, json_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
