#include "siglab/metrics/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "json.hpp"

namespace siglab::metrics {

static_assert(std::endian::native == std::endian::little,
              "metric binary format is little-endian");

namespace {
constexpr char kMagic[4] = {'S', 'G', 'M', 'F'};
constexpr std::uint32_t kVersion = 1;
} // namespace

void save_metric_binary(const MetricField& g, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("save_metric_binary: cannot open " + path);
    const std::uint32_t n = std::uint32_t(g.grid().n());
    const std::uint32_t N = std::uint32_t(g.grid().N());
    const double B = g.lower_bound(), p = g.p_int();
    os.write(kMagic, 4);
    os.write(reinterpret_cast<const char*>(&kVersion), 4);
    os.write(reinterpret_cast<const char*>(&n), 4);
    os.write(reinterpret_cast<const char*>(&N), 4);
    os.write(reinterpret_cast<const char*>(&B), 8);
    os.write(reinterpret_cast<const char*>(&p), 8);
    std::vector<double> row(n * n);
    for (std::int64_t s = 0; s < g.grid().sites(); ++s) {
        const Eigen::MatrixXd& A = g.at(s);
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j = 0; j < n; ++j) row[i * n + j] = A(i, j);
        os.write(reinterpret_cast<const char*>(row.data()),
                 std::streamsize(row.size() * 8));
    }
    if (!os) throw std::runtime_error("save_metric_binary: write failed for " + path);
}

MetricField load_metric_binary(const dec::PeriodicGrid& grid, const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("load_metric_binary: cannot open " + path);
    char magic[4];
    std::uint32_t version, n, N;
    double B, p;
    is.read(magic, 4);
    is.read(reinterpret_cast<char*>(&version), 4);
    is.read(reinterpret_cast<char*>(&n), 4);
    is.read(reinterpret_cast<char*>(&N), 4);
    is.read(reinterpret_cast<char*>(&B), 8);
    is.read(reinterpret_cast<char*>(&p), 8);
    if (!is || std::memcmp(magic, kMagic, 4) != 0 || version != kVersion)
        throw std::runtime_error("load_metric_binary: bad header in " + path);
    if (int(n) != grid.n() || int(N) != grid.N())
        throw std::runtime_error("load_metric_binary: grid mismatch in " + path);
    std::vector<Eigen::MatrixXd> blocks;
    blocks.reserve(std::size_t(grid.sites()));
    std::vector<double> row(n * n);
    for (std::int64_t s = 0; s < grid.sites(); ++s) {
        is.read(reinterpret_cast<char*>(row.data()), std::streamsize(row.size() * 8));
        if (!is) throw std::runtime_error("load_metric_binary: truncated body in " + path);
        Eigen::MatrixXd A(n, n);
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j = 0; j < n; ++j) A(i, j) = row[i * n + j];
        blocks.push_back(std::move(A));
    }
    return MetricField(grid, std::move(blocks), B, p, false, "loaded:" + path);
}

std::string metric_to_json(const MetricField& g) {
    nlohmann::json j;
    j["format"] = "siglab-metric";
    j["version"] = kVersion;
    j["n"] = g.grid().n();
    j["N"] = g.grid().N();
    j["B"] = g.lower_bound();
    j["p_int"] = g.p_int();
    auto& body = j["A"];
    for (std::int64_t s = 0; s < g.grid().sites(); ++s) {
        const Eigen::MatrixXd& A = g.at(s);
        nlohmann::json rows = nlohmann::json::array();
        for (int i = 0; i < A.rows(); ++i) {
            nlohmann::json r = nlohmann::json::array();
            for (int jj = 0; jj < A.cols(); ++jj) r.push_back(A(i, jj));
            rows.push_back(std::move(r));
        }
        body.push_back(std::move(rows));
    }
    return j.dump();
}

MetricField metric_from_json(const dec::PeriodicGrid& grid, const std::string& json_text) {
    const nlohmann::json j = nlohmann::json::parse(json_text);
    if (j.value("format", "") != "siglab-metric")
        throw std::runtime_error("metric_from_json: not a metric document");
    if (j.at("n").get<int>() != grid.n() || j.at("N").get<int>() != grid.N())
        throw std::runtime_error("metric_from_json: grid mismatch");
    const int n = grid.n();
    std::vector<Eigen::MatrixXd> blocks;
    blocks.reserve(std::size_t(grid.sites()));
    for (const auto& rows : j.at("A")) {
        Eigen::MatrixXd A(n, n);
        for (int i = 0; i < n; ++i)
            for (int jj = 0; jj < n; ++jj) A(i, jj) = rows.at(i).at(jj).get<double>();
        blocks.push_back(std::move(A));
    }
    return MetricField(grid, std::move(blocks), j.at("B").get<double>(),
                       j.at("p_int").get<double>(), false, "json");
}

} // namespace siglab::metrics
