#pragma once

// Packaged problem instances. Every builder is deterministic in its seed and
// parameters; random data is drawn from SplitMix64 streams (see rng.hpp) in
// the order documented on each builder.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mascope/run.hpp"

namespace mascope::experiments {

/// Column plotted by emit_svg for a scenario.
enum class PlotMetric { dist_to_opt, rel_gap_iter, rel_gap_ravg, consensus_residual };

std::string_view to_string(PlotMetric metric);

struct ScenarioInstance {
  std::string name;
  RunConfig config;
  std::string schedule_descriptor;
  PlotMetric plot = PlotMetric::dist_to_opt;
};

/// Overrides accepted by every scenario (CLI flags and config file keys).
struct ScenarioParams {
  std::uint64_t seed = 1;
  std::optional<EngineKind> engine;
  std::optional<std::size_t> iterations;
  std::optional<StepKind> step_kind;
  std::optional<double> step_scale;
  std::optional<std::string> network_kind;
  std::optional<double> network_d;
  std::optional<LogStride> stride;
};

struct Scenario {
  std::string name;
  std::string doc;
  std::function<ScenarioInstance(const ScenarioParams&)> build;
};

/// Two agents, f_i = x^T Q x + q_i^T x + r_i with
///   Q = [[1.2, 0.4], [0.4, 1.8]], q_1 = [8, -4], q_2 = [2.93, -11.46],
///   r_1 = 20, r_2 = 25, X_1 = [-1, 1]^2, X_2 = [0.5, 2.5]^2,
/// started at the per-agent constrained minimisers [-1, 1] and [0.5, 2.5].
std::vector<Agent<double>> two_agent_problem();
VectorXd local_minimiser(std::size_t agent);

/// Dual averaging from the local minimisers, A = 11^T/2, c(k) = 1/sqrt(k+1).
ScenarioInstance scenario_prop1();

/// Same data, algo1; reference optimum from the centralised solver.
ScenarioInstance scenario_two_agent_algo1(StepKind step_kind);

enum class NetworkKind { complete, line, sparse };

struct NetworkChoice {
  NetworkKind kind = NetworkKind::complete;
  double d = 0.3;  ///< sparsity degree, sparse networks only
  std::string describe() const;
};

std::optional<NetworkChoice> parse_network(std::string_view kind, std::optional<double> d);

/// m agents with f_i = |y_i - b_i^T x| on the common ball ||x|| <= 5.
/// Draw order from SplitMix64(seed): y_1..y_m ~ N(0,1); B row-major
/// ~ U[0,1]; then per agent an initial point ~ U[-5,5]^n projected onto the
/// ball. Sparse graphs use SplitMix64 seed (seed ^ 0x5eed).
ScenarioInstance scenario_robust_regression(std::size_t m, std::size_t n, NetworkChoice network, std::uint64_t seed);

/// m agents with f_i = (y_i - b_i^T x)^2 + (lambda/m) ||x||_1 on boxes
/// X_i = [-1 - s_i^-, 1 + s_i^+] with face slacks ~ U[0, 0.5]; for every face
/// one seeded agent gets zero slack so the intersection is exactly [-1,1]^n.
/// Draw order: y, B (as above), slacks (agent-major, lower then upper per
/// coordinate), one zero-slack agent index per face (lower faces then upper
/// faces), initial points ~ U(X_i). Four Metropolis matrices from
/// random_sparse(m, d, seed*4 + p + 1), cycled. Harmonic steps 0.2/(k+1).
ScenarioInstance scenario_l2_l1(std::size_t m, std::size_t n, double lambda, std::uint64_t seed, double d = 0.1);

const std::vector<Scenario>& scenario_library();
const Scenario* find_scenario(std::string_view name);

/// Applies the engine / iteration / step / stride overrides to an instance.
void apply_overrides(ScenarioInstance& instance, const ScenarioParams& params);

}  // namespace mascope::experiments
