#include "mascope/experiments/scenarios.hpp"

#include <algorithm>
#include <sstream>

#include "mascope/rng.hpp"

namespace mascope::experiments {

namespace {

constexpr double kBallRadius = 5.0;

MixingSchedule<double> static_schedule(const Topology& t) {
  return MixingSchedule<double>({metropolis_weights(t)});
}

Objective<double> total_objective(const std::vector<Agent<double>>& agents) {
  std::vector<Objective<double>> terms;
  terms.reserve(agents.size());
  for (const auto& a : agents) terms.push_back(a.objective);
  return SumFn<double>(std::move(terms));
}

VectorXd uniform_point(SplitMix64& rng, const VectorXd& lo, const VectorXd& hi) {
  VectorXd p(lo.size());
  for (Eigen::Index j = 0; j < p.size(); ++j) p[j] = rng.uniform(lo[j], hi[j]);
  return p;
}

struct RegressionData {
  VectorXd y;
  MatrixXd B;
};

RegressionData draw_regression(SplitMix64& rng, std::size_t m, std::size_t n) {
  RegressionData data{VectorXd(static_cast<Eigen::Index>(m)),
                      MatrixXd(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n))};
  for (Eigen::Index i = 0; i < data.y.size(); ++i) data.y[i] = rng.normal();
  for (Eigen::Index i = 0; i < data.B.rows(); ++i)
    for (Eigen::Index j = 0; j < data.B.cols(); ++j) data.B(i, j) = rng.uniform();
  return data;
}

/// Projected subgradient in rounds, each restarted at the previous best
/// point with a step scale ten times smaller.
OptimumReference<double> refined_reference(const Objective<double>& f, const ConstraintSet<double>& feasible,
                                           double scale, int rounds, std::size_t budget) {
  auto ref = centralized_solve<double>(f, feasible, budget, StepSchedule<double>(StepKind::inv_sqrt, scale));
  for (int r = 1; r < rounds; ++r) {
    scale /= 10;
    auto next =
        centralized_solve<double>(f, feasible, budget, StepSchedule<double>(StepKind::inv_sqrt, scale), ref.x_star);
    if (next.f_star <= ref.f_star) ref = std::move(next);
  }
  ref.method = "projected-subgradient-best-iterate-restarted";
  return ref;
}

}  // namespace

std::string_view to_string(PlotMetric metric) {
  switch (metric) {
    case PlotMetric::dist_to_opt:
      return "dist_to_opt";
    case PlotMetric::rel_gap_iter:
      return "rel_gap_iter";
    case PlotMetric::rel_gap_ravg:
      return "rel_gap_ravg";
    case PlotMetric::consensus_residual:
      return "consensus_residual";
  }
  return "?";
}

std::vector<Agent<double>> two_agent_problem() {
  const MatrixXd Q = mat({{1.2, 0.4}, {0.4, 1.8}});
  return {
      {QuadraticFn<double>(Q, vec({8.0, -4.0}), 20.0), Box(vec({-1.0, -1.0}), vec({1.0, 1.0}))},
      {QuadraticFn<double>(Q, vec({2.93, -11.46}), 25.0), Box(vec({0.5, 0.5}), vec({2.5, 2.5}))},
  };
}

VectorXd local_minimiser(std::size_t agent) {
  return agent == 0 ? vec({-1.0, 1.0}) : vec({0.5, 2.5});
}

ScenarioInstance scenario_prop1() {
  auto agents = two_agent_problem();
  const Box feasible = intersect_boxes<double>({std::get<Box>(agents[0].set), std::get<Box>(agents[1].set)});
  const Objective<double> total = total_objective(agents);
  OptimumReference<double> ref =
      centralized_solve<double>(total, feasible, 20000, StepSchedule<double>(StepKind::inv_sqrt, 0.1));
  ScenarioInstance inst{
      "prop1",
      RunConfig{.engine = EngineKind::dual_avg,
                .agents = std::move(agents),
                .initial_points = {local_minimiser(0), local_minimiser(1)},
                .schedule = static_schedule(complete_graph(2)),
                .steps = StepSchedule<double>(StepKind::inv_sqrt, 1.0),
                .iterations = 500,
                .stride = LogStride::each(1),
                .seed = 0,
                .reference = std::move(ref),
                .interior = chebyshev_interior(feasible),
                .prox = {},
                .record_iterates = true},
      "static complete_graph(2) metropolis",
      PlotMetric::dist_to_opt};
  return inst;
}

ScenarioInstance scenario_two_agent_algo1(StepKind step_kind) {
  if (step_kind == StepKind::constant) throw ParameterError("two_agent: step kind must be harmonic or inv_sqrt");
  ScenarioInstance inst = scenario_prop1();
  inst.name = step_kind == StepKind::harmonic ? "two_agent" : "two_agent_sqrt";
  inst.config.engine = EngineKind::algo1;
  inst.config.steps = StepSchedule<double>(step_kind, 1.0);
  inst.config.iterations = 10000;
  inst.config.stride = LogStride::geometric();
  inst.config.record_iterates = false;
  return inst;
}

std::string NetworkChoice::describe() const {
  std::ostringstream out;
  switch (kind) {
    case NetworkKind::complete:
      out << "complete";
      break;
    case NetworkKind::line:
      out << "line";
      break;
    case NetworkKind::sparse:
      out << "sparse(d=" << d << ")";
      break;
  }
  return out.str();
}

std::optional<NetworkChoice> parse_network(std::string_view kind, std::optional<double> d) {
  if (kind == "complete") return NetworkChoice{NetworkKind::complete, 0.0};
  if (kind == "line") return NetworkChoice{NetworkKind::line, 0.0};
  if (kind == "sparse") return NetworkChoice{NetworkKind::sparse, d.value_or(0.3)};
  return std::nullopt;
}

ScenarioInstance scenario_robust_regression(std::size_t m, std::size_t n, NetworkChoice network, std::uint64_t seed) {
  if (m < 2 || n < 1) throw ParameterError("robust regression: need m >= 2 and n >= 1");
  SplitMix64 rng(seed);
  const RegressionData data = draw_regression(rng, m, n);
  const Ball ball(VectorXd::Zero(static_cast<Eigen::Index>(n)), kBallRadius);

  std::vector<Agent<double>> agents;
  std::vector<VectorXd> starts;
  const VectorXd corner = VectorXd::Constant(static_cast<Eigen::Index>(n), kBallRadius);
  for (std::size_t i = 0; i < m; ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    agents.push_back({AbsResidualFn<double>(data.B.row(row).transpose(), data.y[row]), ball});
  }
  for (std::size_t i = 0; i < m; ++i) starts.push_back(project(ball, uniform_point(rng, -corner, corner)));

  Topology topology = complete_graph(m);
  switch (network.kind) {
    case NetworkKind::complete:
      break;
    case NetworkKind::line:
      topology = path_graph(m);
      break;
    case NetworkKind::sparse:
      topology = random_sparse(m, network.d, seed ^ 0x5eedULL);
      break;
  }

  const Objective<double> total = total_objective(agents);
  OptimumReference<double> ref = refined_reference(total, ball, 0.05, 4, 100000);

  std::ostringstream schedule;
  schedule << "static " << network.describe() << " metropolis";
  return ScenarioInstance{
      "robust",
      RunConfig{.engine = EngineKind::algo1,
                .agents = std::move(agents),
                .initial_points = std::move(starts),
                .schedule = static_schedule(topology),
                .steps = StepSchedule<double>(StepKind::inv_sqrt, 1.0),
                .iterations = 5000,
                .stride = LogStride::geometric(),
                .seed = seed,
                .reference = std::move(ref),
                .interior = InteriorBall<double>{ball.center(), ball.radius()},
                .prox = {},
                .record_iterates = false},
      schedule.str(),
      PlotMetric::rel_gap_iter};
}

ScenarioInstance scenario_l2_l1(std::size_t m, std::size_t n, double lambda, std::uint64_t seed, double d) {
  if (m <= n) throw ParameterError("l2_l1: need m > n");
  if (!(lambda >= 0)) throw ParameterError("l2_l1: lambda must be >= 0");
  SplitMix64 rng(seed);
  const RegressionData data = draw_regression(rng, m, n);
  const auto dims = static_cast<Eigen::Index>(n);

  std::vector<VectorXd> lower(m, VectorXd::Constant(dims, -1.0));
  std::vector<VectorXd> upper(m, VectorXd::Constant(dims, 1.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < dims; ++j) {
      lower[i][j] -= rng.uniform(0.0, 0.5);
      upper[i][j] += rng.uniform(0.0, 0.5);
    }
  }
  for (Eigen::Index j = 0; j < dims; ++j) lower[rng.index(m)][j] = -1.0;
  for (Eigen::Index j = 0; j < dims; ++j) upper[rng.index(m)][j] = 1.0;

  std::vector<Agent<double>> agents;
  std::vector<VectorXd> starts;
  for (std::size_t i = 0; i < m; ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    std::vector<Objective<double>> terms{SquaredResidualFn<double>(data.B.row(row).transpose(), data.y[row]),
                                         L1RegFn<double>(lambda / static_cast<double>(m))};
    agents.push_back({SumFn<double>(std::move(terms)), Box(lower[i], upper[i])});
  }
  for (std::size_t i = 0; i < m; ++i) starts.push_back(uniform_point(rng, lower[i], upper[i]));

  std::vector<MixingMatrix<double>> matrices;
  for (std::uint64_t p = 0; p < 4; ++p) matrices.push_back(metropolis_weights(random_sparse(m, d, seed * 4 + p + 1)));

  const Box feasible = Box::cube(dims, -1.0, 1.0);
  const Objective<double> total = total_objective(agents);
  OptimumReference<double> ref = refined_reference(total, feasible, 0.01, 3, 100000);

  std::ostringstream schedule;
  schedule << "cyclic 4 x random_sparse(d=" << d << ") metropolis";
  return ScenarioInstance{
      "l2l1",
      RunConfig{.engine = EngineKind::algo1,
                .agents = std::move(agents),
                .initial_points = std::move(starts),
                .schedule = MixingSchedule<double>(std::move(matrices)),
                .steps = StepSchedule<double>(StepKind::harmonic, 0.2),
                .iterations = 10000,
                .stride = LogStride::geometric(),
                .seed = seed,
                .reference = std::move(ref),
                .interior = chebyshev_interior(feasible),
                .prox = {},
                .record_iterates = false},
      schedule.str(),
      PlotMetric::dist_to_opt};
}

void apply_overrides(ScenarioInstance& instance, const ScenarioParams& params) {
  auto& cfg = instance.config;
  if (params.engine) cfg.engine = *params.engine;
  if (params.iterations) cfg.iterations = *params.iterations;
  if (params.step_kind || params.step_scale) {
    cfg.steps = StepSchedule<double>(params.step_kind.value_or(cfg.steps.kind), params.step_scale.value_or(cfg.steps.scale));
  }
  if (params.stride) cfg.stride = *params.stride;
}

namespace {

NetworkChoice network_from(const ScenarioParams& p, NetworkChoice fallback) {
  if (!p.network_kind) {
    if (p.network_d && fallback.kind == NetworkKind::sparse) fallback.d = *p.network_d;
    return fallback;
  }
  auto choice = parse_network(*p.network_kind, p.network_d);
  if (!choice) throw ParameterError("unknown network kind '" + *p.network_kind + "'");
  return *choice;
}

Scenario robust_entry(std::string name, std::string doc, std::size_t m, NetworkChoice network,
                      std::size_t iterations) {
  return Scenario{name, std::move(doc), [name, m, network, iterations](const ScenarioParams& p) {
                    auto inst = scenario_robust_regression(m, 4, network_from(p, network), p.seed);
                    inst.name = name;
                    inst.config.iterations = iterations;
                    apply_overrides(inst, p);
                    return inst;
                  }};
}

std::vector<Scenario> build_library() {
  std::vector<Scenario> lib;
  lib.push_back({"prop1", "two-agent dual averaging started at the local minimisers (fixed-point check)",
                 [](const ScenarioParams& p) {
                   auto inst = scenario_prop1();
                   apply_overrides(inst, p);
                   return inst;
                 }});
  lib.push_back({"two_agent", "two-agent quadratic problem, algo1, harmonic steps 1/(k+1)",
                 [](const ScenarioParams& p) {
                   auto inst = scenario_two_agent_algo1(StepKind::harmonic);
                   apply_overrides(inst, p);
                   return inst;
                 }});
  lib.push_back({"two_agent_sqrt", "two-agent quadratic problem, algo1, steps 1/sqrt(k+1)",
                 [](const ScenarioParams& p) {
                   auto inst = scenario_two_agent_algo1(StepKind::inv_sqrt);
                   apply_overrides(inst, p);
                   return inst;
                 }});
  lib.push_back(robust_entry("robust_complete", "robust regression m=30 n=4, complete graph", 30,
                             {NetworkKind::complete, 0.0}, 5000));
  lib.push_back(robust_entry("robust_line", "robust regression m=30 n=4, line graph", 30, {NetworkKind::line, 0.0}, 5000));
  lib.push_back(robust_entry("robust_sparse03", "robust regression m=30 n=4, sparse graph d=0.3", 30,
                             {NetworkKind::sparse, 0.3}, 5000));
  lib.push_back(robust_entry("robust_sparse08", "robust regression m=30 n=4, sparse graph d=0.8", 30,
                             {NetworkKind::sparse, 0.8}, 5000));
  lib.push_back(robust_entry("robust_desk", "robust regression m=10 n=4, complete graph, 1e5 iterations", 10,
                             {NetworkKind::complete, 0.0}, 100000));
  lib.push_back({"l2l1_desk", "l2 regression + l1 penalty, m=30 n=5, 4-matrix cyclic schedule",
                 [](const ScenarioParams& p) {
                   auto inst = scenario_l2_l1(30, 5, 0.1, p.seed, p.network_d.value_or(0.1));
                   inst.name = "l2l1_desk";
                   apply_overrides(inst, p);
                   return inst;
                 }});
  lib.push_back({"l2l1", "l2 regression + l1 penalty, m=300 n=10, 4-matrix cyclic schedule",
                 [](const ScenarioParams& p) {
                   auto inst = scenario_l2_l1(300, 10, 0.1, p.seed, p.network_d.value_or(0.1));
                   inst.config.iterations = 2000;
                   apply_overrides(inst, p);
                   return inst;
                 }});
  return lib;
}

}  // namespace

const std::vector<Scenario>& scenario_library() {
  static const std::vector<Scenario> lib = build_library();
  return lib;
}

const Scenario* find_scenario(std::string_view name) {
  for (const auto& s : scenario_library())
    if (s.name == name) return &s;
  return nullptr;
}

}  // namespace mascope::experiments
