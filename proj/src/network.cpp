#include "mascope/network.hpp"

#include <numeric>
#include <sstream>

#include "mascope/rng.hpp"

namespace mascope {

Topology::Topology(std::size_t agent_count, std::vector<Edge> edges) : agent_count_(agent_count) {
  for (auto [i, j] : edges) {
    if (i >= agent_count || j >= agent_count) throw ParameterError("Topology: edge index out of range");
    if (i == j) throw ParameterError("Topology: self-loops are implicit and may not be listed");
    edges_.emplace_back(std::min(i, j), std::max(i, j));
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

std::vector<std::size_t> Topology::degrees() const {
  std::vector<std::size_t> deg(agent_count_, 0);
  for (const auto& [i, j] : edges_) {
    ++deg[i];
    ++deg[j];
  }
  return deg;
}

Topology complete_graph(std::size_t m) {
  if (m < 2) throw ParameterError("complete_graph: need at least 2 agents");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) edges.emplace_back(i, j);
  return Topology(m, std::move(edges));
}

Topology path_graph(std::size_t m) {
  if (m < 2) throw ParameterError("path_graph: need at least 2 agents");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < m; ++i) edges.emplace_back(i, i + 1);
  return Topology(m, std::move(edges));
}

std::size_t sparse_edge_budget(std::size_t m, double d) {
  const double md = static_cast<double>(m);
  const double raw = std::floor((d * md * md - md) / 2.0);
  const std::size_t full = m * (m - 1) / 2;
  if (raw <= 0) return 0;
  return std::min(full, static_cast<std::size_t>(raw));
}

Topology random_sparse(std::size_t m, double d, std::uint64_t seed) {
  if (m < 2) throw ParameterError("random_sparse: need at least 2 agents");
  if (!(d > 0.0 && d <= 1.0)) throw ParameterError("random_sparse: d must lie in (0, 1]");
  const std::size_t budget = sparse_edge_budget(m, d);
  if (budget < m - 1) throw ParameterError("random_sparse: edge budget cannot hold a spanning tree");

  SplitMix64 rng(seed);
  // Random recursive tree over a shuffled node order.
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = m - 1; i > 0; --i) std::swap(order[i], order[rng.index(i + 1)]);
  std::vector<std::vector<bool>> used(m, std::vector<bool>(m, false));
  std::vector<Edge> edges;
  for (std::size_t k = 1; k < m; ++k) {
    const std::size_t a = order[k];
    const std::size_t b = order[rng.index(k)];
    edges.emplace_back(std::min(a, b), std::max(a, b));
    used[a][b] = used[b][a] = true;
  }

  std::vector<Edge> spare;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (!used[i][j]) spare.emplace_back(i, j);
  for (std::size_t i = spare.size(); i > 1; --i) std::swap(spare[i - 1], spare[rng.index(i)]);
  const std::size_t extra = budget - (m - 1);
  edges.insert(edges.end(), spare.begin(), spare.begin() + static_cast<std::ptrdiff_t>(extra));
  return Topology(m, std::move(edges));
}

bool is_connected(std::size_t m, const std::vector<Edge>& edges) {
  if (m <= 1) return true;
  std::vector<std::vector<std::size_t>> adj(m);
  for (const auto& [i, j] : edges) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  std::vector<bool> seen(m, false);
  std::queue<std::size_t> frontier;
  frontier.push(0);
  seen[0] = true;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop();
    for (std::size_t v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++reached;
        frontier.push(v);
      }
    }
  }
  return reached == m;
}

std::string ValidationReport::describe() const {
  std::ostringstream out;
  auto flag = [&](const char* name, bool ok) { out << name << '=' << (ok ? "ok" : "FAIL") << ' '; };
  flag("symmetric", symmetric);
  flag("row_stochastic", row_stochastic);
  flag("column_stochastic", column_stochastic);
  flag("nonnegative", nonnegative);
  flag("diagonal_bound", diagonal_bound);
  flag("positive_entry_bound", positive_entry_bound);
  std::string s = out.str();
  if (!s.empty()) s.pop_back();
  return s;
}

}  // namespace mascope
