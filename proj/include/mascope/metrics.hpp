#pragma once

// Convergence and assumption diagnostics over a snapshot of agent states.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "mascope/algorithms.hpp"
#include "mascope/errors.hpp"
#include "mascope/numeric.hpp"
#include "mascope/sets.hpp"

namespace mascope {

/// One logged iteration. The first seven fields are the CSV columns; the
/// rest are kept in memory for the property checks.
struct MetricRow {
  std::size_t k = 0;
  double consensus_residual = 0;       ///< max_ij ||x_i - x_j||
  double dist_to_opt = 0;              ///< sqrt(sum_i ||x_i - x*||^2)
  double rel_gap_iter = 0;             ///< |sum_i f_i(x_i) - f*| / |f*|
  double rel_gap_ravg = 0;             ///< same over running averages
  double epsilon = 0;                  ///< sum_i dist(v, X_i), v the mean iterate
  double max_err = 0;                  ///< max_i ||x_i(k) - z_i(k-1)||
  double consensus_residual_ravg = 0;  ///< max_ij ||xhat_i - xhat_j||
  double error_energy = 0;             ///< sum over iterations <= k of sum_i ||e_i||^2
};

template <typename Scalar>
const Vector<Scalar>& point_of(const AgentState<Scalar>& s, bool use_running_avg) {
  return use_running_avg ? s.xhat : s.x;
}

template <typename Scalar>
Vector<Scalar> average_point(std::span<const AgentState<Scalar>> states) {
  if (states.empty()) throw ParameterError("average_point: no agents");
  Vector<Scalar> sum = Vector<Scalar>::Zero(states.front().x.size());
  for (const auto& s : states) sum += s.x;
  return sum / static_cast<Scalar>(states.size());
}

/// sum_i dist(v, X_i)
template <typename Scalar>
Scalar infeasibility(const Vector<Scalar>& v, std::span<const ConstraintSet<Scalar>> sets) {
  Scalar eps = 0;
  for (const auto& s : sets) eps += distance(s, v);
  return eps;
}

/// rho/(eps+rho) v + eps/(eps+rho) xbar with eps = sum_i dist(v, X_i). The
/// result must lie in every set whenever ball(xbar, rho) lies in all of
/// them; a violation raises DiagnosticsError.
template <typename Scalar>
Vector<Scalar> feasible_surrogate(const Vector<Scalar>& v, std::span<const ConstraintSet<Scalar>> sets,
                                  const Vector<Scalar>& xbar, Scalar rho, Scalar tol = Scalar(1e-9)) {
  if (!(rho > Scalar(0))) throw ParameterError("feasible_surrogate: rho must be > 0");
  const Scalar eps = infeasibility(v, sets);
  const Vector<Scalar> out = (rho / (eps + rho)) * v + (eps / (eps + rho)) * xbar;
  for (const auto& s : sets) {
    if (!contains(s, out, tol)) throw DiagnosticsError("feasible_surrogate: result left the intersection");
  }
  return out;
}

template <typename Scalar>
Scalar consensus_residual(std::span<const AgentState<Scalar>> states, bool use_running_avg) {
  Scalar worst = 0;
  for (std::size_t i = 0; i < states.size(); ++i)
    for (std::size_t j = i + 1; j < states.size(); ++j)
      worst = std::max(worst, (point_of(states[i], use_running_avg) - point_of(states[j], use_running_avg)).norm());
  return worst;
}

template <typename Scalar>
Scalar distance_to_optimum(std::span<const AgentState<Scalar>> states, const Vector<Scalar>& x_star,
                           bool use_running_avg = false) {
  Scalar total = 0;
  for (const auto& s : states) total += (point_of(s, use_running_avg) - x_star).squaredNorm();
  return std::sqrt(total);
}

template <typename Scalar>
struct ObjectiveGap {
  Scalar absolute = 0;
  Scalar relative = 0;
  bool relative_is_absolute = false;  ///< |f*| < 1e-9, relative holds the absolute gap
};

/// |sum_i f_i(p_i) - f*| where each agent's own point enters its own f_i.
template <typename Scalar>
ObjectiveGap<Scalar> objective_gap(std::span<const AgentState<Scalar>> states,
                                   std::span<const Agent<Scalar>> agents, const OptimumReference<Scalar>& ref,
                                   bool use_running_avg) {
  if (states.size() != agents.size()) throw DimensionError("objective_gap: agent count mismatch");
  Scalar total = 0;
  for (std::size_t i = 0; i < states.size(); ++i) total += value(agents[i].objective, point_of(states[i], use_running_avg));
  ObjectiveGap<Scalar> gap;
  gap.absolute = std::abs(total - ref.f_star);
  if (std::abs(ref.f_star) < Scalar(1e-9)) {
    gap.relative = gap.absolute;
    gap.relative_is_absolute = true;
  } else {
    gap.relative = gap.absolute / std::abs(ref.f_star);
  }
  return gap;
}

struct Envelope {
  double first_decade_max = 0;
  double last_decade_max = 0;
};

/// Max of gap(k) sqrt(k) / ln k over the first logged decade
/// [burn_in, 10 burn_in) and the last logged decade (k_max/10, k_max].
Envelope rate_envelope(std::span<const std::pair<std::size_t, double>> series, std::size_t burn_in);

/// Series of (k, row.*field) for rate_envelope.
std::vector<std::pair<std::size_t, double>> series_of(std::span<const MetricRow> rows, double MetricRow::*field);

/// Exact diameter of the union of boxes and balls.
template <typename Scalar>
Scalar union_diameter(std::span<const ConstraintSet<Scalar>> sets) {
  // Farthest pair between two boxes separates per coordinate; a ball adds
  // its radius to the farthest point from its centre.
  auto far_sq = [](const BoxSet<Scalar>& a, const BoxSet<Scalar>& b) {
    Scalar total = 0;
    for (Eigen::Index j = 0; j < a.dim(); ++j) {
      const Scalar s1 = a.upper()[j] - b.lower()[j];
      const Scalar s2 = b.upper()[j] - a.lower()[j];
      total += std::max(s1 * s1, s2 * s2);
    }
    return total;
  };
  auto far_from_point = [](const BoxSet<Scalar>& box, const Vector<Scalar>& c) {
    Scalar total = 0;
    for (Eigen::Index j = 0; j < box.dim(); ++j) {
      const Scalar s1 = box.upper()[j] - c[j];
      const Scalar s2 = box.lower()[j] - c[j];
      total += std::max(s1 * s1, s2 * s2);
    }
    return std::sqrt(total);
  };
  Scalar best = 0;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i; j < sets.size(); ++j) {
      const auto* bi = std::get_if<BoxSet<Scalar>>(&sets[i]);
      const auto* bj = std::get_if<BoxSet<Scalar>>(&sets[j]);
      const auto* ci = std::get_if<BallSet<Scalar>>(&sets[i]);
      const auto* cj = std::get_if<BallSet<Scalar>>(&sets[j]);
      Scalar d = 0;
      if (bi && bj) {
        d = std::sqrt(far_sq(*bi, *bj));
      } else if (ci && cj) {
        d = (ci->center() - cj->center()).norm() + ci->radius() + cj->radius();
      } else if (bi) {
        d = far_from_point(*bi, cj->center()) + cj->radius();
      } else {
        d = far_from_point(*bj, ci->center()) + ci->radius();
      }
      best = std::max(best, d);
    }
  }
  return best;
}

template <typename Scalar>
struct TheoreticalConstants {
  Scalar lambda;
  Scalar q;
  Scalar mu;
  Scalar diameter;
};

/// lambda = 2 (1 + eta^-(m-1)T) / (1 - eta^(m-1)T),
/// q = (1 - eta^(m-1)T)^(1/((m-1)T)), mu = (2/rho) m D + 1.
template <typename Scalar>
TheoreticalConstants<Scalar> theoretical_constants(Scalar eta, std::size_t m, std::size_t window, Scalar rho,
                                                   std::span<const ConstraintSet<Scalar>> sets) {
  if (!(eta > Scalar(0) && eta < Scalar(1))) throw ParameterError("theoretical_constants: eta must lie in (0,1)");
  if (window < 1 || m < 2) throw ParameterError("theoretical_constants: need T >= 1 and m >= 2");
  if (!(rho > Scalar(0))) throw ParameterError("theoretical_constants: rho must be > 0");
  const Scalar power = static_cast<Scalar>((m - 1) * window);
  const Scalar eta_pow = std::pow(eta, power);
  TheoreticalConstants<Scalar> c;
  c.lambda = Scalar(2) * (Scalar(1) + Scalar(1) / eta_pow) / (Scalar(1) - eta_pow);
  c.q = std::pow(Scalar(1) - eta_pow, Scalar(1) / power);
  c.diameter = union_diameter(sets);
  c.mu = (Scalar(2) / rho) * static_cast<Scalar>(m) * c.diameter + Scalar(1);
  return c;
}

}  // namespace mascope
