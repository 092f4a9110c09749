#include <doctest.h>

#include <cmath>

#include "mascope/errors.hpp"
#include "mascope/experiments/scenarios.hpp"
#include "mascope/metrics.hpp"
#include "mascope/run.hpp"

using namespace mascope;

namespace {

std::vector<AgentState<double>> states_at(const std::vector<VectorXd>& xs) {
  std::vector<AgentState<double>> s;
  for (const auto& x : xs) {
    AgentState<double> st;
    st.x = x;
    st.z = x;
    st.xhat = x;
    s.push_back(st);
  }
  return s;
}

VectorXd rand_vec(SplitMix64& rng, Eigen::Index n, double lo, double hi) {
  VectorXd v(n);
  for (Eigen::Index j = 0; j < n; ++j) v[j] = rng.uniform(lo, hi);
  return v;
}

std::vector<VectorXd> box_vertices(const Box& b) {
  const auto n = static_cast<unsigned>(b.dim());
  std::vector<VectorXd> out;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    VectorXd v(n);
    for (unsigned j = 0; j < n; ++j) v[j] = (mask >> j) & 1u ? b.upper()[j] : b.lower()[j];
    out.push_back(v);
  }
  return out;
}

}  // namespace

TEST_CASE("average_point") {
  const auto same = states_at({vec({1, 2}), vec({1, 2}), vec({1, 2})});
  CHECK(average_point<double>(same) == vec({1, 2}));
  const auto pm = states_at({vec({3, -1}), vec({-3, 1})});
  CHECK(average_point<double>(pm) == vec({0, 0}));
  SplitMix64 rng(6);
  for (int t = 0; t < 50; ++t) {
    std::vector<VectorXd> xs{rand_vec(rng, 2, -4, 4), rand_vec(rng, 2, -4, 4), rand_vec(rng, 2, -4, 4)};
    const VectorXd avg = average_point<double>(states_at(xs));
    for (Eigen::Index j = 0; j < 2; ++j) CHECK(avg[j] == doctest::Approx((xs[0][j] + xs[1][j] + xs[2][j]) / 3).epsilon(1e-14));
  }
  CHECK_THROWS_AS(average_point<double>(std::span<const AgentState<double>>()), ParameterError);
}

TEST_CASE("feasible_surrogate") {
  const std::vector<Set> sets{Box::cube(2, -1, 1), Box::cube(2, 0.5, 2.5)};
  const VectorXd xbar = vec({0.75, 0.75});
  CHECK(feasible_surrogate<double>(vec({0.8, 0.6}), sets, xbar, 0.25) == vec({0.8, 0.6}));

  const double eps = std::sqrt(0.5);
  CHECK(infeasibility<double>(vec({0, 0}), sets) == doctest::Approx(eps).epsilon(1e-15));
  const VectorXd expected = (0.25 / (eps + 0.25)) * vec({0, 0}) + (eps / (eps + 0.25)) * xbar;
  const VectorXd got = feasible_surrogate<double>(vec({0, 0}), sets, xbar, 0.25);
  CHECK((got - expected).norm() <= 1e-15);
  for (const auto& s : sets) CHECK(contains(s, got, 1e-9));

  const VectorXd v_far = vec({1e9, -1e9});
  const double eps_far = infeasibility<double>(v_far, sets);
  CHECK(eps_far / (eps_far + 0.25) > 1 - 1e-9);
  const VectorXd far = feasible_surrogate<double>(v_far, sets, xbar, 0.25);
  for (const auto& s : sets) CHECK(contains(s, far, 1e-9));

  // an interior ball that is not inside the intersection trips the check
  CHECK_THROWS_AS(feasible_surrogate<double>(vec({3, 3}), sets, vec({0, 0}), 5.0), DiagnosticsError);
  CHECK_THROWS_AS(feasible_surrogate<double>(vec({0, 0}), sets, xbar, 0.0), ParameterError);

  SplitMix64 rng(8);
  for (int t = 0; t < 1000; ++t) {
    const VectorXd v = rand_vec(rng, 2, -6, 6);
    const VectorXd s = feasible_surrogate<double>(v, sets, xbar, 0.25);
    for (const auto& set : sets) CHECK(contains(set, s, 1e-9));
  }
}

TEST_CASE("consensus_residual") {
  CHECK(consensus_residual<double>(states_at({vec({1, 1}), vec({1, 1})}), false) == 0.0);
  CHECK(consensus_residual<double>(states_at({vec({0, 0}), vec({3, 0})}), false) == 3.0);
  SplitMix64 rng(10);
  for (int t = 0; t < 30; ++t) {
    std::vector<VectorXd> xs;
    for (int i = 0; i < 7; ++i) xs.push_back(rand_vec(rng, 3, -2, 2));
    auto states = states_at(xs);
    for (auto& s : states) s.xhat = rand_vec(rng, 3, -1, 1);
    double worst = 0, worst_avg = 0;
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = 0; j < xs.size(); ++j) {
        worst = std::max(worst, std::sqrt((xs[i] - xs[j]).squaredNorm()));
        worst_avg = std::max(worst_avg, std::sqrt((states[i].xhat - states[j].xhat).squaredNorm()));
      }
    CHECK(consensus_residual<double>(states, false) == doctest::Approx(worst).epsilon(1e-14));
    CHECK(consensus_residual<double>(states, true) == doctest::Approx(worst_avg).epsilon(1e-14));
  }
}

TEST_CASE("objective_gap") {
  const auto agents = experiments::two_agent_problem();
  const VectorXd xs = vec({0.5, 1});
  const OptimumReference<double> ref{xs, value(agents[0].objective, xs) + value(agents[1].objective, xs), "exact"};
  const auto at_opt = objective_gap<double>(states_at({xs, xs}), agents, ref, false);
  CHECK(at_opt.absolute == 0.0);
  CHECK(at_opt.relative == 0.0);

  const std::vector<Agent<double>> one{{QuadraticFn<double>(MatrixXd::Identity(1, 1), vec({0}), 0), Box::cube(1, -5, 5)}};
  const auto g = objective_gap<double>(states_at({vec({2})}), one, OptimumReference<double>{vec({0}), 0, "exact"}, false);
  CHECK(g.absolute == 4.0);
  CHECK(g.relative == 4.0);
  CHECK(g.relative_is_absolute);

  const auto rel = objective_gap<double>(states_at({vec({2})}), one, OptimumReference<double>{vec({0}), -2, "x"}, false);
  CHECK(rel.relative == 3.0);
  CHECK_FALSE(rel.relative_is_absolute);
}

TEST_CASE("rate_envelope") {
  std::vector<std::pair<std::size_t, double>> exact, slack;
  for (std::size_t k = 1; k <= 100000; k = k < 10 ? k + 1 : k + k / 10) {
    const double kd = static_cast<double>(k);
    exact.emplace_back(k, std::log(kd) / std::sqrt(kd));
    slack.emplace_back(k, 1 / std::sqrt(kd));
  }
  const auto e = rate_envelope(exact, 100);
  CHECK(e.first_decade_max == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.last_decade_max == doctest::Approx(1.0).epsilon(1e-12));
  const auto s = rate_envelope(slack, 100);
  CHECK(s.last_decade_max < s.first_decade_max);
  double first = 0;
  for (const auto& [k, g] : slack)
    if (k >= 100 && k < 1000) first = std::max(first, g * std::sqrt(static_cast<double>(k)) / std::log(static_cast<double>(k)));
  CHECK(s.first_decade_max == doctest::Approx(first).epsilon(1e-14));

  CHECK_THROWS_AS(rate_envelope(exact, 1), ParameterError);
  std::vector<std::pair<std::size_t, double>> short_trace(exact.begin(), exact.begin() + 20);
  CHECK_THROWS_AS(rate_envelope(short_trace, 100), ParameterError);
  const std::vector<std::pair<std::size_t, double>> sparse{{5, 1.0}, {100000, 1.0}};
  CHECK_THROWS_AS(rate_envelope(sparse, 100), ParameterError);
}

TEST_CASE("theoretical_constants") {
  const std::vector<Set> sets{Box::cube(2, -1, 1), Box::cube(2, 0.5, 2.5)};
  const auto c = theoretical_constants<double>(0.5, 2, 1, 0.25, sets);
  CHECK(c.lambda == doctest::Approx(12.0).epsilon(1e-15));
  CHECK(c.q == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(c.diameter == doctest::Approx(3.5 * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(c.mu == doctest::Approx((2 / 0.25) * 2 * 3.5 * std::sqrt(2.0) + 1).epsilon(1e-15));

  SplitMix64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const double eta = rng.uniform(0.01, 0.99);
    const std::size_t m = 2 + rng.index(5), window = 1 + rng.index(3);
    const auto k = theoretical_constants<double>(eta, m, window, 0.5, sets);
    CHECK(k.q > 0);
    CHECK(k.q <= 1);
    CHECK(k.lambda > 0);
    CHECK(k.mu >= 1);
  }
  CHECK_THROWS_AS(theoretical_constants<double>(1.0, 2, 1, 0.25, sets), ParameterError);
  CHECK_THROWS_AS(theoretical_constants<double>(0.5, 2, 0, 0.25, sets), ParameterError);
}

TEST_CASE("union_diameter matches enumeration") {
  SplitMix64 rng(14);
  for (int t = 0; t < 50; ++t) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.index(4));
    std::vector<Set> sets;
    std::vector<VectorXd> pts;
    for (int b = 0; b < 3; ++b) {
      const VectorXd lo = rand_vec(rng, n, -3, 1);
      const Box box(lo, lo + rand_vec(rng, n, 0.1, 2));
      sets.emplace_back(box);
      for (auto& v : box_vertices(box)) pts.push_back(v);
    }
    double brute = 0;
    for (const auto& a : pts)
      for (const auto& b : pts) brute = std::max(brute, (a - b).norm());
    CHECK(union_diameter<double>(sets) == doctest::Approx(brute).epsilon(1e-14));

    // add a ball: farthest points from the centre lie on box vertices or the other ball
    const Ball ball(rand_vec(rng, n, -1, 1), rng.uniform(0.2, 2));
    sets.emplace_back(ball);
    double with_ball = brute;
    for (const auto& p : pts) with_ball = std::max(with_ball, (p - ball.center()).norm() + ball.radius());
    with_ball = std::max(with_ball, 2 * ball.radius());
    CHECK(union_diameter<double>(sets) == doctest::Approx(with_ball).epsilon(1e-14));
  }
}

TEST_CASE("run-level metric properties") {
  auto inst = experiments::scenario_two_agent_algo1(StepKind::harmonic);
  inst.config.iterations = 10000;
  inst.config.stride = LogStride::each(100);
  const auto trace = run(inst.config);
  // infeasibility of the mean iterate shrinks
  CHECK(trace.rows.back().epsilon < 0.05 * trace.rows.front().epsilon);
  // square-summable errors: the last decade adds at most 1% of the total energy
  double before_last_decade = 0;
  for (const auto& r : trace.rows)
    if (r.k <= 1000) before_last_decade = r.error_energy;
  const double total = trace.rows.back().error_energy;
  CHECK(total - before_last_decade <= 0.01 * total);
  for (std::size_t r = 1; r < trace.rows.size(); ++r) CHECK(trace.rows[r].k > trace.rows[r - 1].k);
}
