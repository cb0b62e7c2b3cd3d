#pragma once

#include <string>
#include <vector>

#include "layerlab/analysis.hpp"

namespace layerlab {

/// 17-significant-digit, locale-independent decimal formatting.
std::string format_g17(double v);

/// report.csv: one row per epsilon, comma-separated, header line first.
std::string report_csv(const ConvergenceReport& report);

/// report.json: slopes, residuals, pass/fail ledger.
std::string report_json(const ConvergenceReport& report);

/// Columnar text (space-separated, header line naming columns).
std::string columnar_trajectory(const std::vector<StateUV>& snapshots, const IntervalGrid& grid);
std::string columnar_outer(const OuterProfiles& outer);
std::string columnar_layer(const LayerProfiles& layer);
std::string columnar_assembly(const Assembly& assembly, const IntervalGrid& grid);

void write_file(const std::string& path, const std::string& content);

}  // namespace layerlab
