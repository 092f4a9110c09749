#pragma once

// CSV and SVG emission for run traces. Output bytes depend only on the
// trace contents, so equal traces give identical files.

#include <filesystem>
#include <string>
#include <vector>

#include "mascope/run.hpp"

namespace mascope::experiments {

inline constexpr const char* kCsvHeader = "k,consensus_residual,dist_to_opt,rel_gap_iter,rel_gap_ravg,epsilon,max_err";

/// Run metadata written next to the CSV as `<name>.meta`.
struct TraceMeta {
  std::string scenario;
  std::uint64_t seed = 0;
  std::string engine;
  std::string schedule;
  std::size_t iterations = 0;
  std::string step;
  std::string stride;
  bool relative_gap_is_absolute = false;
  std::size_t prox_inner_failures = 0;
};

std::string format_csv(const std::vector<MetricRow>& rows);
std::string format_meta(const TraceMeta& meta);

void emit_csv(const RunTrace& trace, const std::filesystem::path& path);
void emit_meta(const TraceMeta& meta, const std::filesystem::path& path);

struct SvgSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;  ///< (k, value); k = 0 and value <= 0 are dropped
};

std::string format_svg(const std::vector<SvgSeries>& series, const std::string& title, const std::string& y_label);
void emit_svg(const std::vector<SvgSeries>& series, const std::string& title, const std::string& y_label,
              const std::filesystem::path& path);

/// Writes text to path, throwing IoError with the path on failure.
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace mascope::experiments
