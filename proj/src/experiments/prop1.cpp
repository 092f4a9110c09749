#include "mascope/experiments/prop1.hpp"

#include <cmath>
#include <sstream>

namespace mascope::experiments {

namespace {

struct Deviation {
  double max = 0;
  std::optional<std::size_t> first_k;
  std::size_t first_agent = 0;
};

Deviation deviation_of(const RunConfig& config) {
  const RunTrace trace = run(config);
  Deviation dev;
  for (std::size_t r = 0; r < trace.rows.size(); ++r) {
    for (std::size_t i = 0; i < trace.iterates[r].size(); ++i) {
      const double d = (trace.iterates[r][i] - config.initial_points[i]).lpNorm<Eigen::Infinity>();
      dev.max = std::max(dev.max, d);
      if (d > kProp1Tolerance && !dev.first_k) {
        dev.first_k = trace.rows[r].k;
        dev.first_agent = i;
      }
    }
  }
  return dev;
}

std::string fmt(const VectorXd& v) {
  std::ostringstream out;
  out << '[';
  for (Eigen::Index j = 0; j < v.size(); ++j) out << (j ? ", " : "") << v[j];
  out << ']';
  return out.str();
}

}  // namespace

bool Prop1Report::vi_all_hold() const {
  for (const auto& v : base_case)
    if (!v.holds) return false;
  return step_failures == 0;
}

Prop1Report prop1_check(std::size_t iterations) {
  ScenarioInstance inst = scenario_prop1();
  inst.config.iterations = iterations;
  const RunConfig& cfg = inst.config;
  const std::size_t m = cfg.agents.size();

  Prop1Report rep;
  rep.iterations = iterations;
  const Deviation dev = deviation_of(cfg);
  rep.max_deviation = dev.max;
  rep.first_deviation_k = dev.first_k;
  rep.first_deviation_agent = dev.first_agent;
  rep.fixed_point = dev.max <= kProp1Tolerance;

  rep.sign_pattern = true;
  for (std::size_t i = 0; i < m; ++i) {
    rep.gradients.push_back(subgrad(cfg.agents[i].objective, cfg.initial_points[i]));
    rep.sign_pattern = rep.sign_pattern && rep.gradients[i][0] >= 0 && rep.gradients[i][1] <= 0;
  }

  // Dual sums that would arise if every agent sat at its minimiser forever.
  std::vector<VectorXd> dual = rep.gradients;
  const auto& a = cfg.schedule.at(0);
  for (std::size_t k = 0; k < iterations; ++k) {
    const double c = step_size(cfg.steps, k);
    std::vector<VectorXd> next(m);
    for (std::size_t i = 0; i < m; ++i) {
      next[i] = rep.gradients[i];
      for (std::size_t j = 0; j < m; ++j) next[i] += a(i, j) * dual[j];
    }
    for (std::size_t i = 0; i < m; ++i) {
      Prop1VI vi;
      vi.k = k;
      vi.agent = i;
      vi.g = next[i] + (2.0 / c) * cfg.initial_points[i];
      vi.holds = box_vi_holds(vi.g, cfg.initial_points[i], std::get<Box>(cfg.agents[i].set), kProp1Tolerance);
      if (k == 0) {
        rep.base_case.push_back(vi);
      } else {
        ++rep.step_checks;
        if (!vi.holds) {
          ++rep.step_failures;
          if (!rep.first_step_failure) rep.first_step_failure = vi;
        }
      }
    }
    dual = std::move(next);
  }

  RunConfig halved = cfg;
  for (auto& agent : halved.agents) {
    const auto& f = std::get<QuadraticFn<double>>(agent.objective.variant());
    agent.objective = QuadraticFn<double>(MatrixXd(f.Q() / 2.0), f.q(), f.r());
  }
  for (std::size_t i = 0; i < m; ++i) halved.initial_points[i] = cfg.initial_points[i];
  halved.reference.f_star = 0;
  halved.interior.reset();
  rep.halved_max_deviation = deviation_of(halved).max;
  return rep;
}

std::string describe(const Prop1Report& r) {
  std::ostringstream out;
  out << (r.passed() ? "PASS" : "FAIL") << ": dual averaging from the local minimisers, " << r.iterations
      << " iterations, max deviation " << r.max_deviation << " (tolerance " << kProp1Tolerance << ")\n";
  out << "gradients at the local minimisers:";
  for (std::size_t i = 0; i < r.gradients.size(); ++i) out << " agent " << i + 1 << " " << fmt(r.gradients[i]);
  out << "\nsign pattern (g[0] >= 0, g[1] <= 0): " << (r.sign_pattern ? "holds" : "fails") << '\n';
  out << "VI base case:";
  for (const auto& v : r.base_case) out << " agent " << v.agent + 1 << " " << (v.holds ? "true" : "false") << " g=" << fmt(v.g);
  out << "\nVI step k+1: " << r.step_checks - r.step_failures << "/" << r.step_checks << " true\n";
  if (r.passed() && r.vi_all_hold()) return out.str();

  out << "discrepancy report:\n";
  if (r.first_deviation_k) {
    out << "  first deviation at k=" << *r.first_deviation_k << ", agent " << r.first_deviation_agent + 1 << '\n';
  }
  if (r.first_step_failure) {
    out << "  first failing step certificate at k=" << r.first_step_failure->k << ", agent "
        << r.first_step_failure->agent + 1 << " g=" << fmt(r.first_step_failure->g) << '\n';
  }
  out << "  gradients use f_i = x^T Q x + q_i^T x + r_i, so grad = 2 Q x + q_i\n";
  out << "  with f_i = x^T Q x / 2 + q_i^T x + r_i the max deviation is " << r.halved_max_deviation << '\n';
  return out.str();
}

}  // namespace mascope::experiments
