#pragma once

// Communication graphs and the doubly stochastic mixing matrices built on
// them. Time variation is a cyclic schedule of matrices.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "mascope/errors.hpp"
#include "mascope/numeric.hpp"

namespace mascope {

using Edge = std::pair<std::size_t, std::size_t>;

/// Undirected graph on agents 0..m-1. Edges are stored as (i, j) with
/// i < j, sorted and without duplicates; self-loops are never stored.
class Topology {
 public:
  Topology(std::size_t agent_count, std::vector<Edge> edges);

  std::size_t agent_count() const { return agent_count_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::vector<std::size_t> degrees() const;

  friend bool operator==(const Topology&, const Topology&) = default;

 private:
  std::size_t agent_count_;
  std::vector<Edge> edges_;
};

Topology complete_graph(std::size_t m);
Topology path_graph(std::size_t m);

/// Undirected edge budget floor((d m^2 - m) / 2), capped at m(m-1)/2.
std::size_t sparse_edge_budget(std::size_t m, double d);

/// Random spanning tree plus uniformly chosen extra edges up to
/// sparse_edge_budget(m, d). Deterministic in seed.
Topology random_sparse(std::size_t m, double d, std::uint64_t seed);

/// Connectivity of an undirected adjacency list over m nodes (BFS).
bool is_connected(std::size_t m, const std::vector<Edge>& edges);

inline bool is_connected(const Topology& t) { return is_connected(t.agent_count(), t.edges()); }

template <typename Scalar>
class MixingMatrix {
 public:
  /// Takes the entries as given; eta_bound is the smallest positive entry.
  /// Use validate_mixing to check the matrix.
  explicit MixingMatrix(Matrix<Scalar> entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) throw DimensionError("MixingMatrix: not square");
    require_finite(entries_, "MixingMatrix");
    eta_bound_ = std::numeric_limits<Scalar>::infinity();
    for (Eigen::Index i = 0; i < entries_.rows(); ++i)
      for (Eigen::Index j = 0; j < entries_.cols(); ++j)
        if (entries_(i, j) > Scalar(0)) eta_bound_ = std::min(eta_bound_, entries_(i, j));
    if (!std::isfinite(eta_bound_)) eta_bound_ = 0;
  }

  const Matrix<Scalar>& entries() const { return entries_; }
  Scalar operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }
  Scalar eta_bound() const { return eta_bound_; }
  std::size_t agent_count() const { return static_cast<std::size_t>(entries_.rows()); }

  /// Off-diagonal support as undirected edges.
  std::vector<Edge> support() const {
    std::vector<Edge> edges;
    for (Eigen::Index i = 0; i < entries_.rows(); ++i)
      for (Eigen::Index j = i + 1; j < entries_.cols(); ++j)
        if (entries_(i, j) > Scalar(0) || entries_(j, i) > Scalar(0))
          edges.emplace_back(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    return edges;
  }

 private:
  Matrix<Scalar> entries_;
  Scalar eta_bound_;
};

/// W_ij = 1 / (1 + max(deg_i, deg_j)) on edges, W_ii = 1 - sum_{j != i} W_ij.
template <typename Scalar = double>
MixingMatrix<Scalar> metropolis_weights(const Topology& t) {
  if (!is_connected(t)) throw ValidationError("metropolis_weights: topology is disconnected");
  const auto m = static_cast<Eigen::Index>(t.agent_count());
  const auto deg = t.degrees();
  Matrix<Scalar> w = Matrix<Scalar>::Zero(m, m);
  for (const auto& [i, j] : t.edges()) {
    const Scalar weight = Scalar(1) / Scalar(1 + std::max(deg[i], deg[j]));
    w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = weight;
    w(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = weight;
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    Scalar off = 0;
    for (Eigen::Index j = 0; j < m; ++j)
      if (j != i) off += w(i, j);
    w(i, i) = Scalar(1) - off;
  }
  return MixingMatrix<Scalar>(std::move(w));
}

struct ValidationReport {
  bool symmetric = false;
  bool row_stochastic = false;
  bool column_stochastic = false;
  bool nonnegative = false;
  bool diagonal_bound = false;
  bool positive_entry_bound = false;

  bool passed() const {
    return symmetric && row_stochastic && column_stochastic && nonnegative && diagonal_bound &&
           positive_entry_bound;
  }
  std::string describe() const;
};

template <typename Scalar>
ValidationReport validate_mixing(const MixingMatrix<Scalar>& a, Scalar eta, Scalar tol = Scalar(1e-12)) {
  const auto& w = a.entries();
  ValidationReport r;
  r.symmetric = w.rows() == 0 || (w - w.transpose()).cwiseAbs().maxCoeff() <= tol;
  r.row_stochastic = ((w.rowwise().sum().array() - Scalar(1)).abs() <= tol).all();
  r.column_stochastic = ((w.colwise().sum().array() - Scalar(1)).abs() <= tol).all();
  r.nonnegative = (w.array() >= Scalar(0)).all();
  r.diagonal_bound = (w.diagonal().array() >= eta).all();
  r.positive_entry_bound = ((w.array() <= Scalar(0)) || (w.array() >= eta)).all();
  return r;
}

/// A cyclic sequence of mixing matrices: A(k) = matrices[k mod period].
template <typename Scalar>
class MixingSchedule {
 public:
  explicit MixingSchedule(std::vector<MixingMatrix<Scalar>> matrices) : matrices_(std::move(matrices)) {
    if (matrices_.empty()) throw ParameterError("MixingSchedule: empty schedule");
    for (const auto& a : matrices_)
      if (a.agent_count() != matrices_.front().agent_count())
        throw DimensionError("MixingSchedule: matrices disagree on agent count");
  }

  const MixingMatrix<Scalar>& at(std::size_t k) const { return matrices_[k % matrices_.size()]; }
  std::size_t period() const { return matrices_.size(); }
  std::size_t agent_count() const { return matrices_.front().agent_count(); }
  const std::vector<MixingMatrix<Scalar>>& matrices() const { return matrices_; }

  /// Smallest eta_bound over the period.
  Scalar eta_bound() const {
    Scalar eta = matrices_.front().eta_bound();
    for (const auto& a : matrices_) eta = std::min(eta, a.eta_bound());
    return eta;
  }

 private:
  std::vector<MixingMatrix<Scalar>> matrices_;
};

/// Smallest window length T such that every T consecutive matrices of the
/// (cyclic) schedule have a connected union support graph.
template <typename Scalar>
std::size_t certify_schedule(const MixingSchedule<Scalar>& s) {
  const std::size_t period = s.period();
  const std::size_t m = s.agent_count();
  std::vector<std::vector<Edge>> supports;
  supports.reserve(period);
  for (const auto& a : s.matrices()) supports.push_back(a.support());
  for (std::size_t window = 1; window <= period; ++window) {
    bool all_connected = true;
    for (std::size_t start = 0; start < period && all_connected; ++start) {
      std::vector<Edge> merged;
      for (std::size_t w = 0; w < window; ++w) {
        const auto& e = supports[(start + w) % period];
        merged.insert(merged.end(), e.begin(), e.end());
      }
      all_connected = is_connected(m, merged);
    }
    if (all_connected) return window;
  }
  throw ValidationError("certify_schedule: union graph over one period is disconnected");
}

}  // namespace mascope
