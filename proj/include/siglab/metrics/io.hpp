#pragma once

#include <string>

#include "siglab/metrics/metric_field.hpp"

namespace siglab::metrics {

/// Flat binary layout: magic "SGMF", u32 version, u32 n, u32 N, f64 B,
/// f64 p_int, then row-major per-site n*n little-endian f64 blocks.
void save_metric_binary(const MetricField& g, const std::string& path);
MetricField load_metric_binary(const dec::PeriodicGrid& grid, const std::string& path);

/// JSON variant for small grids (same fields, nested arrays).
std::string metric_to_json(const MetricField& g);
MetricField metric_from_json(const dec::PeriodicGrid& grid, const std::string& json_text);

} // namespace siglab::metrics
