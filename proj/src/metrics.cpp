#include "mascope/metrics.hpp"

#include <cmath>

namespace mascope {

Envelope rate_envelope(std::span<const std::pair<std::size_t, double>> series, std::size_t burn_in) {
  if (burn_in < 2) throw ParameterError("rate_envelope: burn-in must be >= 2 so that ln k > 0");
  std::size_t k_max = 0;
  for (const auto& [k, v] : series) k_max = std::max(k_max, k);
  if (k_max < 100 * burn_in) throw ParameterError("rate_envelope: trace spans fewer than two decades past burn-in");

  auto scaled = [](std::size_t k, double gap) {
    const double kd = static_cast<double>(k);
    return gap * std::sqrt(kd) / std::log(kd);
  };
  Envelope env;
  bool first_seen = false;
  bool last_seen = false;
  for (const auto& [k, gap] : series) {
    if (k >= burn_in && k < 10 * burn_in) {
      env.first_decade_max = first_seen ? std::max(env.first_decade_max, scaled(k, gap)) : scaled(k, gap);
      first_seen = true;
    }
    if (10 * k > k_max && k <= k_max) {
      env.last_decade_max = last_seen ? std::max(env.last_decade_max, scaled(k, gap)) : scaled(k, gap);
      last_seen = true;
    }
  }
  if (!first_seen || !last_seen) throw ParameterError("rate_envelope: a decade has no logged samples");
  return env;
}

std::vector<std::pair<std::size_t, double>> series_of(std::span<const MetricRow> rows, double MetricRow::*field) {
  std::vector<std::pair<std::size_t, double>> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.emplace_back(r.k, r.*field);
  return out;
}

}  // namespace mascope
