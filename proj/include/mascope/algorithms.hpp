#pragma once

// Iterative engines over a network of agents, each holding a private
// objective and constraint set:
//
//  * algo1_iterate       mix iterates, evaluate local subgradients at the
//                        mixed points, mix the subgradients, then take a
//                        projected step from the mixed point.
//  * dual_avg_iterate    accumulate mixed subgradient sums and map them to
//                        the local set through a scaled projection.
//  * prox_noavg_iterate  mix iterates, then a local proximal step on the
//                        agent's own objective (no subgradient exchange).
//
// Reductions over neighbours always run in index order so traces are
// bit-reproducible.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mascope/errors.hpp"
#include "mascope/network.hpp"
#include "mascope/numeric.hpp"
#include "mascope/objectives.hpp"
#include "mascope/rng.hpp"
#include "mascope/sets.hpp"

namespace mascope {

enum class StepKind { harmonic, inv_sqrt, constant };

std::string_view to_string(StepKind kind);
std::optional<StepKind> parse_step_kind(std::string_view name);

template <typename Scalar>
struct StepSchedule {
  StepKind kind = StepKind::inv_sqrt;
  Scalar scale = 1;

  StepSchedule() = default;
  StepSchedule(StepKind k, Scalar s) : kind(k), scale(s) {
    if (!(scale > Scalar(0)) || !std::isfinite(scale)) throw ParameterError("StepSchedule: scale must be > 0");
  }
};

template <typename Scalar>
Scalar step_size(const StepSchedule<Scalar>& s, std::size_t k) {
  const auto n = static_cast<Scalar>(k + 1);
  switch (s.kind) {
    case StepKind::harmonic:
      return s.scale / n;
    case StepKind::inv_sqrt:
      return s.scale / std::sqrt(n);
    case StepKind::constant:
      return s.scale;
  }
  return s.scale;
}

/// S(k) = c(1) + ... + c(k), with S(0) = 0.
template <typename Scalar>
Scalar step_sum(const StepSchedule<Scalar>& s, std::size_t k) {
  Scalar total = 0;
  for (std::size_t r = 1; r <= k; ++r) total += step_size(s, r);
  return total;
}

/// One step of the weighted running average
///   xhat(k+1) = (c(k+1) x(k+1) + S(k) xhat(k)) / S(k+1).
/// At k = 0 the history is empty and the result is x_new.
template <typename Scalar>
Vector<Scalar> running_average_update(const Vector<Scalar>& xhat, const Vector<Scalar>& x_new,
                                      const StepSchedule<Scalar>& s, std::size_t k) {
  require_same_size(xhat, x_new, "running_average_update");
  const Scalar prior = step_sum(s, k);
  const Scalar next = step_size(s, k + 1);
  return (next * x_new + prior * xhat) / (prior + next);
}

/// Incremental form of running_average_update that carries S(k) along.
template <typename Scalar>
class RunningAverage {
 public:
  explicit RunningAverage(Vector<Scalar> initial) : value_(std::move(initial)) {}

  /// Folds in x(k+1) with weight c(k+1).
  void push(const Vector<Scalar>& x_new, Scalar weight) {
    const Scalar next = weight_sum_ + weight;
    value_ = (weight * x_new + weight_sum_ * value_) / next;
    weight_sum_ = next;
  }

  const Vector<Scalar>& value() const { return value_; }
  Scalar weight_sum() const { return weight_sum_; }

 private:
  Vector<Scalar> value_;
  Scalar weight_sum_ = 0;
};

template <typename Scalar>
struct Agent {
  Objective<Scalar> objective;
  ConstraintSet<Scalar> set;
};

/// Per-agent iterate state. The error vector x(k+1) - z(k) is derived from
/// x and z on demand.
template <typename Scalar>
struct AgentState {
  Vector<Scalar> x;       ///< current iterate
  Vector<Scalar> z;       ///< mixed estimate used to produce x
  Vector<Scalar> g;       ///< local subgradient
  Vector<Scalar> d;       ///< mixed subgradient
  Vector<Scalar> xhat;    ///< running average
  Vector<Scalar> dual_z;  ///< subgradient accumulator (dual averaging only)

  Vector<Scalar> error() const { return x - z; }
};

/// Initial state: x = z = xhat = x0, g = d = dual_z = subgrad(f, x0).
template <typename Scalar>
AgentState<Scalar> initial_state(const Agent<Scalar>& agent, const Vector<Scalar>& x0) {
  AgentState<Scalar> s;
  s.x = x0;
  s.z = x0;
  s.g = subgrad(agent.objective, x0);
  s.d = s.g;
  s.xhat = x0;
  s.dual_z = s.g;
  return s;
}

namespace detail {

template <typename Scalar>
void require_network(std::span<const Agent<Scalar>> agents, std::span<const AgentState<Scalar>> states,
                     const MixingMatrix<Scalar>& a) {
  if (agents.size() != states.size() || a.agent_count() != states.size()) {
    throw DimensionError("iterate: agent count mismatch between agents, states and mixing matrix");
  }
}

/// sum_j A_ij v_j over a member selected by `pick`, in index order.
template <typename Scalar, typename Pick>
Vector<Scalar> mix_row(const MixingMatrix<Scalar>& a, std::span<const AgentState<Scalar>> states,
                       std::size_t i, Pick pick) {
  Vector<Scalar> out = Vector<Scalar>::Zero(pick(states.front()).size());
  for (std::size_t j = 0; j < states.size(); ++j) {
    const Scalar w = a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    if (w != Scalar(0)) out += w * pick(states[j]);
  }
  return out;
}

}  // namespace detail

/// argmin over X of d^T xi + ||z - xi||^2 / (2c), evaluated as P_X[z - c d].
template <typename Scalar>
Vector<Scalar> algo1_argmin_form(const Vector<Scalar>& d, const Vector<Scalar>& z, Scalar c,
                                 const ConstraintSet<Scalar>& set) {
  if (!(c > Scalar(0))) throw ParameterError("algo1_argmin_form: step must be > 0");
  require_same_size(d, z, "algo1_argmin_form");
  return project(set, z - c * d);
}

template <typename Scalar>
std::vector<AgentState<Scalar>> algo1_iterate(std::span<const Agent<Scalar>> agents,
                                              std::span<const AgentState<Scalar>> states,
                                              const MixingMatrix<Scalar>& a, Scalar c) {
  detail::require_network(agents, states, a);
  if (!(c > Scalar(0))) throw ParameterError("algo1_iterate: step must be > 0");
  std::vector<AgentState<Scalar>> next(states.begin(), states.end());
  for (std::size_t i = 0; i < states.size(); ++i) {
    next[i].z = detail::mix_row(a, states, i, [](const AgentState<Scalar>& s) -> const auto& { return s.x; });
    next[i].g = subgrad(agents[i].objective, next[i].z);
  }
  const std::span<const AgentState<Scalar>> mixed(next);
  std::vector<Vector<Scalar>> averaged(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    averaged[i] = detail::mix_row(a, mixed, i, [](const AgentState<Scalar>& s) -> const auto& { return s.g; });
  }
  for (std::size_t i = 0; i < states.size(); ++i) {
    next[i].d = std::move(averaged[i]);
    next[i].x = algo1_argmin_form(next[i].d, next[i].z, c, agents[i].set);
  }
  return next;
}

/// Dual averaging with per-agent sets:
///   dual_z+ = sum_j A_ij dual_z_j + subgrad(f_i, x_i)
///   x+      = argmin_X dual_z+^T xi + ||xi||^2 / c = P_X[-(c/2) dual_z+]
template <typename Scalar>
std::vector<AgentState<Scalar>> dual_avg_iterate(std::span<const Agent<Scalar>> agents,
                                                 std::span<const AgentState<Scalar>> states,
                                                 const MixingMatrix<Scalar>& a, Scalar c) {
  detail::require_network(agents, states, a);
  if (!(c > Scalar(0))) throw ParameterError("dual_avg_iterate: step must be > 0");
  std::vector<AgentState<Scalar>> next(states.begin(), states.end());
  for (std::size_t i = 0; i < states.size(); ++i) {
    next[i].g = subgrad(agents[i].objective, states[i].x);
    next[i].d = detail::mix_row(a, states, i, [](const AgentState<Scalar>& s) -> const auto& { return s.dual_z; });
    next[i].dual_z = next[i].d + next[i].g;
    next[i].z = detail::mix_row(a, states, i, [](const AgentState<Scalar>& s) -> const auto& { return s.x; });
    next[i].x = project(agents[i].set, Vector<Scalar>(-(c / Scalar(2)) * next[i].dual_z));
  }
  return next;
}

struct ProxSettings {
  double tolerance = 1e-10;
  std::size_t max_iterations = 500;
};

template <typename Scalar>
struct ProxResult {
  Vector<Scalar> point;
  std::size_t iterations = 0;
  bool converged = false;
};

/// argmin over X of f(xi) + ||xi - z||^2 / (2c) by projected (sub)gradient
/// iterations from P_X[z]. Step is 1 / (L + 1/c) when f is smooth with
/// gradient Lipschitz bound L, otherwise 0.5 c.
template <typename Scalar>
ProxResult<Scalar> prox_solve(const Agent<Scalar>& agent, const Vector<Scalar>& z, Scalar c,
                              const ProxSettings& settings = {}) {
  if (!(c > Scalar(0))) throw ParameterError("prox_solve: step must be > 0");
  const auto curvature = smooth_curvature(agent.objective);
  const Scalar step = curvature ? Scalar(1) / (*curvature + Scalar(1) / c) : Scalar(0.5) * c;
  ProxResult<Scalar> out;
  out.point = project(agent.set, z);
  for (std::size_t it = 0; it < settings.max_iterations; ++it) {
    const Vector<Scalar> grad = subgrad(agent.objective, out.point) + (out.point - z) / c;
    Vector<Scalar> candidate = project(agent.set, Vector<Scalar>(out.point - step * grad));
    const Scalar moved = (candidate - out.point).norm();
    out.point = std::move(candidate);
    out.iterations = it + 1;
    if (moved <= static_cast<Scalar>(settings.tolerance)) {
      out.converged = true;
      break;
    }
  }
  return out;
}

template <typename Scalar>
struct ProxStep {
  std::vector<AgentState<Scalar>> states;
  std::size_t inner_failures = 0;  ///< agents whose inner solve hit the cap
};

template <typename Scalar>
ProxStep<Scalar> prox_noavg_iterate(std::span<const Agent<Scalar>> agents,
                                    std::span<const AgentState<Scalar>> states, const MixingMatrix<Scalar>& a,
                                    Scalar c, const ProxSettings& settings = {}) {
  detail::require_network(agents, states, a);
  ProxStep<Scalar> out{std::vector<AgentState<Scalar>>(states.begin(), states.end()), 0};
  for (std::size_t i = 0; i < states.size(); ++i) {
    auto& s = out.states[i];
    s.z = detail::mix_row(a, states, i, [](const AgentState<Scalar>& st) -> const auto& { return st.x; });
    auto prox = prox_solve(agents[i], s.z, c, settings);
    if (!prox.converged) ++out.inner_failures;
    s.x = std::move(prox.point);
    s.g = subgrad(agents[i].objective, s.x);
    s.d = s.g;
  }
  return out;
}

template <typename Scalar>
struct OptimumReference {
  Vector<Scalar> x_star;
  Scalar f_star = 0;
  std::string method;
};

/// Best-iterate projected subgradient method on f over a single set,
/// returning the incumbent with the lowest objective value.
template <typename Scalar>
OptimumReference<Scalar> centralized_solve(const Objective<Scalar>& f, const ConstraintSet<Scalar>& feasible,
                                           std::size_t budget, const StepSchedule<Scalar>& sched,
                                           const std::optional<Vector<Scalar>>& start = std::nullopt) {
  Vector<Scalar> x;
  if (start) {
    x = project(feasible, *start);
  } else if (const auto* box = std::get_if<BoxSet<Scalar>>(&feasible)) {
    x = (box->lower() + box->upper()) / Scalar(2);
  } else {
    x = std::get<BallSet<Scalar>>(feasible).center();
  }
  OptimumReference<Scalar> best{x, value(f, x), "projected-subgradient-best-iterate"};
  for (std::size_t k = 0; k < budget; ++k) {
    const Vector<Scalar> g = subgrad(f, x);
    const Scalar gnorm = g.norm();
    if (gnorm == Scalar(0)) break;
    x = project(feasible, Vector<Scalar>(x - step_size(sched, k) * g));
    const Scalar fx = value(f, x);
    if (fx < best.f_star) {
      best.x_star = x;
      best.f_star = fx;
    }
  }
  return best;
}

}  // namespace mascope
