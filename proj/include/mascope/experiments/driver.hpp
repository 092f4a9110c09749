#pragma once

// Runs scenario instances and writes their artifacts into a directory:
// <scenario>_<engine>.csv, .meta and .svg for single runs, plus
// <scenario>_compare.svg for comparisons.

#include <filesystem>
#include <vector>

#include "mascope/experiments/scenarios.hpp"
#include "mascope/experiments/trace_io.hpp"

namespace mascope::experiments {

SvgSeries series_for(const RunTrace& trace, PlotMetric metric, std::string label);

TraceMeta meta_for(const ScenarioInstance& instance, const RunTrace& trace);

RunTrace run_and_emit(const ScenarioInstance& instance, const std::filesystem::path& dir);

std::vector<RunTrace> compare_and_emit(const ScenarioInstance& instance, const std::vector<EngineKind>& engines,
                                       const std::filesystem::path& dir);

}  // namespace mascope::experiments
