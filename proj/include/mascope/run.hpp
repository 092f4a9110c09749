#pragma once

// Drives one engine over a mixing schedule for a fixed iteration budget and
// records metric rows at the logging stride.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mascope/algorithms.hpp"
#include "mascope/metrics.hpp"
#include "mascope/network.hpp"

namespace mascope {

enum class EngineKind { algo1, dual_avg, prox };

std::string_view to_string(EngineKind kind);
std::optional<EngineKind> parse_engine(std::string_view name);

/// Which iterations get a metric row. Geometric logs k = 0, 1, 2, 4, 8, ...
/// and the final k; Every(s) logs multiples of s and the final k.
struct LogStride {
  std::size_t every = 0;  ///< 0 selects geometric logging

  static LogStride geometric() { return {}; }
  static LogStride each(std::size_t s) { return {s == 0 ? 1 : s}; }
  bool logs(std::size_t k, std::size_t budget) const;
  std::string describe() const;
};

struct RunConfig {
  EngineKind engine = EngineKind::algo1;
  std::vector<Agent<double>> agents;
  std::vector<VectorXd> initial_points;
  MixingSchedule<double> schedule;
  StepSchedule<double> steps;
  std::size_t iterations = 0;
  LogStride stride;
  std::uint64_t seed = 0;
  OptimumReference<double> reference;
  /// Strictly interior ball of the constraint intersection; when present the
  /// feasible surrogate is evaluated (and checked) at every logged row.
  std::optional<InteriorBall<double>> interior;
  ProxSettings prox;
  bool record_iterates = false;
};

struct RunTrace {
  std::vector<MetricRow> rows;
  /// x_i at each logged row, when RunConfig::record_iterates is set.
  std::vector<std::vector<VectorXd>> iterates;
  std::vector<AgentState<double>> final_states;
  std::size_t prox_inner_failures = 0;
  bool relative_gap_is_absolute = false;
};

/// Assumption checks run before the first iteration. Throws
/// ValidationError / DimensionError describing the first failure.
void preflight(const RunConfig& config);

RunTrace run(const RunConfig& config);

std::vector<ConstraintSet<double>> sets_of(std::span<const Agent<double>> agents);

}  // namespace mascope
