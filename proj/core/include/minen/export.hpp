#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "minen/sim.hpp"

namespace minen {

/// Shortest decimal text that reads back to exactly `v`.
std::string format_double(double v);

void write_metrics_csv(std::ostream& out, const RunSummary& s);
void write_coverage_csv(std::ostream& out, const CoverageCounts& c);
nlohmann::json summary_to_json(const RunSummary& s);

inline constexpr const char* kMetricsFile = "metrics.csv";
inline constexpr const char* kCoverageFile = "coverage.csv";
inline constexpr const char* kSummaryFile = "summary.json";

/// Writes the three run artifacts into `dir` (created if needed). Throws
/// IoError on any filesystem failure.
void write_run_outputs(const std::filesystem::path& dir, const RunSummary& s);

/// Writes `text` to `path` in binary mode so line endings stay LF.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace minen
