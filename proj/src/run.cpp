#include "mascope/run.hpp"

#include <algorithm>
#include <cmath>

namespace mascope {

std::string_view to_string(StepKind kind) {
  switch (kind) {
    case StepKind::harmonic:
      return "harmonic";
    case StepKind::inv_sqrt:
      return "inv_sqrt";
    case StepKind::constant:
      return "constant";
  }
  return "?";
}

std::optional<StepKind> parse_step_kind(std::string_view name) {
  if (name == "harmonic") return StepKind::harmonic;
  if (name == "inv_sqrt") return StepKind::inv_sqrt;
  if (name == "constant") return StepKind::constant;
  return std::nullopt;
}

std::string_view to_string(EngineKind kind) {
  switch (kind) {
    case EngineKind::algo1:
      return "algo1";
    case EngineKind::dual_avg:
      return "dual_avg";
    case EngineKind::prox:
      return "prox";
  }
  return "?";
}

std::optional<EngineKind> parse_engine(std::string_view name) {
  if (name == "algo1") return EngineKind::algo1;
  if (name == "dual_avg") return EngineKind::dual_avg;
  if (name == "prox") return EngineKind::prox;
  return std::nullopt;
}

bool LogStride::logs(std::size_t k, std::size_t budget) const {
  if (k == 0 || k == budget) return true;
  if (every != 0) return k % every == 0;
  return (k & (k - 1)) == 0;
}

std::string LogStride::describe() const {
  return every == 0 ? std::string("geometric") : std::to_string(every);
}

std::vector<ConstraintSet<double>> sets_of(std::span<const Agent<double>> agents) {
  std::vector<ConstraintSet<double>> sets;
  sets.reserve(agents.size());
  for (const auto& a : agents) sets.push_back(a.set);
  return sets;
}

void preflight(const RunConfig& config) {
  const std::size_t m = config.agents.size();
  if (m < 2) throw ParameterError("run: at least two agents required");
  if (config.initial_points.size() != m) throw DimensionError("run: one initial point per agent required");
  if (config.schedule.agent_count() != m) throw DimensionError("run: schedule agent count mismatch");
  const Eigen::Index n = dim(config.agents.front().set);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& agent = config.agents[i];
    if (dim(agent.set) != n) throw DimensionError("run: agents disagree on dimension");
    const auto fd = agent.objective.dim();
    if (fd && *fd != n) throw DimensionError("run: objective dimension differs from its set");
    require_finite(config.initial_points[i], "run: initial point");
    if (!contains(agent.set, config.initial_points[i], 1e-9)) {
      throw ValidationError("run: initial point of agent " + std::to_string(i) + " lies outside its set");
    }
  }
  if (config.reference.x_star.size() != n) throw DimensionError("run: reference optimum has the wrong length");
  for (std::size_t p = 0; p < config.schedule.period(); ++p) {
    const auto& a = config.schedule.matrices()[p];
    const auto report = validate_mixing(a, a.eta_bound());
    if (!report.passed()) {
      throw ValidationError("run: mixing matrix " + std::to_string(p) + " fails: " + report.describe());
    }
  }
  certify_schedule(config.schedule);
}

namespace {

MetricRow measure(std::size_t k, std::span<const AgentState<double>> states, const RunConfig& config,
                  std::span<const ConstraintSet<double>> sets, double max_err, double error_energy,
                  bool& gap_flag) {
  MetricRow row;
  row.k = k;
  row.consensus_residual = states.size() > 1 ? consensus_residual(states, false) : 0.0;
  row.consensus_residual_ravg = states.size() > 1 ? consensus_residual(states, true) : 0.0;
  row.dist_to_opt = distance_to_optimum(states, config.reference.x_star);
  const std::span<const Agent<double>> agents(config.agents);
  const auto gap_iter = objective_gap(states, agents, config.reference, false);
  const auto gap_ravg = objective_gap(states, agents, config.reference, true);
  gap_flag = gap_flag || gap_iter.relative_is_absolute;
  row.rel_gap_iter = gap_iter.relative;
  row.rel_gap_ravg = gap_ravg.relative;
  const VectorXd v = average_point(states);
  row.epsilon = infeasibility(v, sets);
  row.max_err = max_err;
  row.error_energy = error_energy;
  if (config.interior) feasible_surrogate(v, sets, config.interior->center, config.interior->radius);
  return row;
}

}  // namespace

RunTrace run(const RunConfig& config) {
  preflight(config);
  const std::span<const Agent<double>> agents(config.agents);
  const auto sets = sets_of(agents);

  std::vector<AgentState<double>> states;
  states.reserve(agents.size());
  for (std::size_t i = 0; i < agents.size(); ++i) states.push_back(initial_state(agents[i], config.initial_points[i]));
  std::vector<RunningAverage<double>> averages;
  averages.reserve(agents.size());
  for (const auto& s : states) averages.emplace_back(s.x);

  RunTrace trace;
  double error_energy = 0;
  auto log_row = [&](std::size_t k, double max_err) {
    trace.rows.push_back(measure(k, states, config, sets, max_err, error_energy, trace.relative_gap_is_absolute));
    if (config.record_iterates) {
      std::vector<VectorXd> xs;
      xs.reserve(states.size());
      for (const auto& s : states) xs.push_back(s.x);
      trace.iterates.push_back(std::move(xs));
    }
  };
  log_row(0, 0.0);

  for (std::size_t k = 0; k < config.iterations; ++k) {
    const auto& a = config.schedule.at(k);
    const double c = step_size(config.steps, k);
    switch (config.engine) {
      case EngineKind::algo1:
        states = algo1_iterate<double>(agents, states, a, c);
        break;
      case EngineKind::dual_avg:
        states = dual_avg_iterate<double>(agents, states, a, c);
        break;
      case EngineKind::prox: {
        auto step = prox_noavg_iterate<double>(agents, states, a, c, config.prox);
        states = std::move(step.states);
        trace.prox_inner_failures += step.inner_failures;
        break;
      }
    }
    const double weight = step_size(config.steps, k + 1);
    double max_err = 0;
    for (std::size_t i = 0; i < states.size(); ++i) {
      const VectorXd e = states[i].error();
      const double e2 = e.squaredNorm();
      error_energy += e2;
      max_err = std::max(max_err, std::sqrt(e2));
      averages[i].push(states[i].x, weight);
      states[i].xhat = averages[i].value();
    }
    if (config.stride.logs(k + 1, config.iterations)) log_row(k + 1, max_err);
  }
  trace.final_states = std::move(states);
  return trace;
}

}  // namespace mascope
