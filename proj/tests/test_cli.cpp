#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code;
    std::string stdout_text;
};

RunResult run_lab(const std::string& args, const fs::path& dir) {
    const fs::path out = dir / "stdout.txt";
    std::ostringstream cmd;
    cmd << LAB_BINARY << " " << args << " > " << out << " 2>&1";
    const int rc = std::system(cmd.str().c_str());
    std::ifstream is(out);
    std::stringstream ss;
    ss << is.rdbuf();
    return {WEXITSTATUS(rc), ss.str()};
}

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("siglab_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream os(p);
    os << text;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("cli: malformed config exits 1 without partial outputs") {
    const auto dir = fresh_dir("badcfg");
    write_file(dir / "cfg.json", R"({"N": 16})");  // missing n
    auto r = run_lab("spectrum --config " + (dir / "cfg.json").string() + " --out " +
                         (dir / "out").string(),
                     dir);
    CHECK(r.exit_code == 1);
    CHECK(r.stdout_text.find("missing field \"n\"") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "out" / "report.json"));
    CHECK_FALSE(fs::exists(dir / "out" / "spectrum.csv"));
}

TEST_CASE("cli: unparseable JSON exits 1 with position info") {
    const auto dir = fresh_dir("parseerr");
    write_file(dir / "cfg.json", "{\"n\": 2,\n  \"N\": }");
    auto r = run_lab("spectrum --config " + (dir / "cfg.json").string(), dir);
    CHECK(r.exit_code == 1);
    CHECK(r.stdout_text.find("parse error") != std::string::npos);
}

TEST_CASE("cli: spectrum on flat T^2 reports kernel_dim 2 and is reproducible") {
    const auto dir = fresh_dir("spectrum");
    write_file(dir / "cfg.json",
               R"({"n": 2, "N": 16, "metric": {"kind": "flat"}, "count": 60})");
    const std::string base =
        "spectrum --config " + (dir / "cfg.json").string() + " --out ";
    auto r1 = run_lab(base + (dir / "o1").string(), dir);
    CHECK(r1.exit_code == 0);
    const std::string rep = slurp(dir / "o1" / "report.json");
    CHECK(rep.find("\"kernel_dim\": 2") != std::string::npos);
    CHECK(fs::exists(dir / "o1" / "manifest.json"));

    auto r2 = run_lab(base + (dir / "o2").string(), dir);
    CHECK(r2.exit_code == 0);
    CHECK(slurp(dir / "o1" / "spectrum.csv") == slurp(dir / "o2" / "spectrum.csv"));
    // manifests carry the same config hash
    const std::string m1 = slurp(dir / "o1" / "manifest.json");
    const std::string m2 = slurp(dir / "o2" / "manifest.json");
    const auto h1 = m1.find("config_hash");
    CHECK(m1.substr(h1, 40) == m2.substr(m2.find("config_hash"), 40));
}

TEST_CASE("cli: exponents table and exit codes") {
    const auto dir = fresh_dir("exponents");
    auto ok = run_lab("exponents lp 3 7", dir);
    CHECK(ok.exit_code == 0);
    CHECK(ok.stdout_text.find("2.8") != std::string::npos);
    CHECK(ok.stdout_text.find("n(g)") != std::string::npos);

    auto bad = run_lab("exponents lp 3 6", dir);
    CHECK(bad.exit_code == 2);
    CHECK(bad.stdout_text.find("p > n(n+1)/2 violated: 6 <= 6") != std::string::npos);

    auto qc = run_lab("exponents qc 3 6 --json", dir);
    CHECK(qc.exit_code == 0);
    CHECK(qc.stdout_text.find("\"n_g\": 6.0") != std::string::npos);
}

TEST_CASE("cli: decay synthetic oracle mode passes with tiny slope error") {
    const auto dir = fresh_dir("oracle");
    write_file(dir / "cfg.json",
               R"({"n": 3, "N": 16, "synthetic_oracle": true, "count": 400,
                   "ledger": {"source": "lp_derivable", "p": 7}})");
    auto r = run_lab("decay --config " + (dir / "cfg.json").string() + " --out " +
                         (dir / "out").string() + " --json",
                     dir);
    CHECK(r.exit_code == 0);
    const std::string summary = slurp(dir / "out" / "summary.json");
    const auto pos = summary.find("\"slope_error\": ");
    REQUIRE(pos != std::string::npos);
    const double err = std::stod(summary.substr(pos + 15));
    CHECK(err < 1e-6);
}

TEST_CASE("cli: homotopy with identical endpoints emits identical rows") {
    const auto dir = fresh_dir("homotopy");
    write_file(dir / "cfg.json",
               R"({"n": 2, "N": 8, "metric": {"kind": "flat"},
                   "metric2": {"kind": "flat"}, "steps": 3, "count": 30})");
    auto r = run_lab("homotopy --config " + (dir / "cfg.json").string() + " --out " +
                         (dir / "out").string(),
                     dir);
    CHECK(r.exit_code == 0);
    std::ifstream is(dir / "out" / "path.csv");
    std::string header, first, line;
    std::getline(is, header);
    std::getline(is, first);
    // all data rows equal except the leading t column
    const std::string tail = first.substr(first.find(','));
    int rows = 1;
    while (std::getline(is, line)) {
        CHECK(line.substr(line.find(',')) == tail);
        ++rows;
    }
    CHECK(rows == 4);
}

TEST_CASE("cli: homotopy verdict failure exits 2") {
    const auto dir = fresh_dir("homojump");
    write_file(dir / "cfg.json",
               R"({"n": 2, "N": 8, "metric": {"kind": "flat"},
                   "metric2": {"kind": "transitions", "scale": 6.0},
                   "steps": 1, "count": 30})");
    auto r = run_lab("homotopy --config " + (dir / "cfg.json").string() + " --out " +
                         (dir / "out").string(),
                     dir);
    CHECK(r.exit_code == 2);
    CHECK(slurp(dir / "out" / "verdict.json").find("FAIL") != std::string::npos);
}

TEST_CASE("cli: verify fault injection trips the tau check") {
    const auto dir = fresh_dir("perturb");
    auto r = run_lab("verify --perturb-star", dir);
    CHECK(r.exit_code == 2);
    CHECK(r.stdout_text.find("[FAIL]") != std::string::npos);
    CHECK(r.stdout_text.find("tau(tau(w))") != std::string::npos);
}

TEST_CASE("cli: signature of the flat 4-torus is zero") {
    const auto dir = fresh_dir("signature");
    write_file(dir / "cfg.json", R"({"n": 4, "N": 4, "metric": {"kind": "flat"}})");
    auto r = run_lab("signature --config " + (dir / "cfg.json").string() + " --out " +
                         (dir / "out").string(),
                     dir);
    CHECK(r.exit_code == 0);
    CHECK(slurp(dir / "out" / "signature.json").find("\"signature\": 0") !=
          std::string::npos);
}
