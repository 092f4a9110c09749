#pragma once

// Fixed-point check for dual averaging on the two-agent problem started at
// the per-agent minimisers, plus the box VI certificates that would make the
// iterates stay put.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mascope/experiments/scenarios.hpp"

namespace mascope::experiments {

struct Prop1VI {
  std::size_t k = 0;       ///< certificate for x_i(k+1) = P[-(c(k)/2) dual_z_i(k+1)]
  std::size_t agent = 0;
  VectorXd g;              ///< dual_z_i(k+1) + (2/c(k)) x_i*, VI direction at x_i*
  bool holds = false;
};

struct Prop1Report {
  std::size_t iterations = 0;
  double max_deviation = 0;  ///< max over logged k and agents of ||x_i(k) - x_i*||_inf
  std::optional<std::size_t> first_deviation_k;
  std::size_t first_deviation_agent = 0;
  bool fixed_point = false;
  std::vector<VectorXd> gradients;  ///< subgrad f_i at x_i*
  bool sign_pattern = false;        ///< first component >= 0 and second <= 0 for every agent
  std::vector<Prop1VI> base_case;   ///< k = 0
  std::size_t step_checks = 0;
  std::size_t step_failures = 0;
  std::optional<Prop1VI> first_step_failure;
  double halved_max_deviation = 0;  ///< same run with f_i = x^T Q x / 2 + q_i^T x + r_i
  bool vi_all_hold() const;
  bool passed() const { return fixed_point; }
};

inline constexpr double kProp1Tolerance = 1e-9;

Prop1Report prop1_check(std::size_t iterations = 500);

/// Human-readable PASS/FAIL, VI report, and (when anything fails) the
/// discrepancy section.
std::string describe(const Prop1Report& report);

}  // namespace mascope::experiments
