// mascope command-line entry point.
//
//   mascope list
//   mascope run --scenario NAME [--engine E] [--seed S] [--iters K] [--out DIR] [--config FILE]
//   mascope validate --scenario NAME
//   mascope compare --scenario NAME --engines E1,E2 [--out DIR]
//   mascope prop1
//
// Exit codes: 0 success, 1 validation or check failure, 2 usage error.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mascope/experiments/config.hpp"
#include "mascope/experiments/driver.hpp"
#include "mascope/experiments/prop1.hpp"

using namespace mascope;
using namespace mascope::experiments;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string scenario;
  std::string engine;
  std::string engines;
  std::string config;
  std::string out;
  std::uint64_t seed = 1;
  std::size_t iters = 0;
};

std::string default_out() {
  const char* env = std::getenv("MASCOPE_OUT");
  return env && *env ? env : "out";
}

EngineKind engine_or_throw(const std::string& name) {
  auto e = parse_engine(name);
  if (!e) throw UsageError("unknown engine '" + name + "' (expected algo1, dual_avg or prox)");
  return *e;
}

ScenarioInstance build(const Options& opt, const CLI::App& sub) {
  ScenarioParams params;
  std::string name = opt.scenario;
  if (!opt.config.empty()) {
    ConfigFile file = load_config(opt.config);
    params = file.params;
    if (name.empty() && file.scenario) name = *file.scenario;
  }
  if (sub.count("--seed")) params.seed = opt.seed;
  if (sub.count("--iters")) params.iterations = opt.iters;
  if (sub.get_option_no_throw("--engine") && sub.count("--engine")) params.engine = engine_or_throw(opt.engine);
  if (name.empty()) throw UsageError("--scenario is required");
  const Scenario* s = find_scenario(name);
  if (!s) throw UsageError("unknown scenario '" + name + "' (see `mascope list`)");
  return s->build(params);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-agent constrained optimisation experiments"};
  app.require_subcommand(1);
  Options opt;
  opt.out = default_out();

  auto* list = app.add_subcommand("list", "list packaged scenarios");
  auto* run_cmd = app.add_subcommand("run", "run one scenario and write CSV, .meta and SVG");
  auto* validate = app.add_subcommand("validate", "check network and set assumptions only");
  auto* compare = app.add_subcommand("compare", "run a scenario with several engines on shared data");
  auto* prop1 = app.add_subcommand("prop1", "dual averaging fixed-point check with VI report");

  for (auto* sub : {run_cmd, validate, compare}) {
    sub->add_option("--scenario", opt.scenario, "scenario name");
    sub->add_option("--seed", opt.seed, "data seed");
    sub->add_option("--iters", opt.iters, "iteration budget");
    sub->add_option("--config", opt.config, "key = value config file")->check(CLI::ExistingFile);
  }
  run_cmd->add_option("--engine", opt.engine, "algo1, dual_avg or prox");
  validate->add_option("--engine", opt.engine, "algo1, dual_avg or prox");
  run_cmd->add_option("--out", opt.out, "output directory (default $MASCOPE_OUT or ./out)");
  compare->add_option("--engines", opt.engines, "comma separated engines, e.g. algo1,prox")->required();
  compare->add_option("--out", opt.out, "output directory (default $MASCOPE_OUT or ./out)");
  std::size_t prop1_iters = 500;
  prop1->add_option("--iters", prop1_iters, "iterations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*list) {
      for (const auto& s : scenario_library()) std::cout << s.name << "\t" << s.doc << "\n";
      return 0;
    }
    if (*prop1) {
      const Prop1Report report = prop1_check(prop1_iters);
      std::cout << describe(report);
      return report.passed() ? 0 : 1;
    }
    if (*validate) {
      const ScenarioInstance inst = build(opt, *validate);
      preflight(inst.config);
      const auto window = certify_schedule(inst.config.schedule);
      std::cout << "OK " << inst.name << ": " << inst.config.agents.size() << " agents, "
                << inst.schedule_descriptor << ", connectivity window T=" << window << "\n";
      return 0;
    }
    if (*run_cmd) {
      const ScenarioInstance inst = build(opt, *run_cmd);
      const RunTrace trace = run_and_emit(inst, opt.out);
      const auto& last = trace.rows.back();
      std::cout << inst.name << " " << to_string(inst.config.engine) << " k=" << last.k
                << " dist_to_opt=" << last.dist_to_opt << " rel_gap_iter=" << last.rel_gap_iter << " -> "
                << opt.out << "\n";
      return 0;
    }
    if (*compare) {
      const ScenarioInstance inst = build(opt, *compare);
      std::vector<EngineKind> engines;
      std::string token;
      for (std::size_t p = 0; p <= opt.engines.size(); ++p) {
        if (p == opt.engines.size() || opt.engines[p] == ',') {
          engines.push_back(engine_or_throw(token));
          token.clear();
        } else {
          token += opt.engines[p];
        }
      }
      const auto traces = compare_and_emit(inst, engines, opt.out);
      for (std::size_t e = 0; e < engines.size(); ++e) {
        std::cout << to_string(engines[e]) << " k=" << traces[e].rows.back().k
                  << " dist_to_opt=" << traces[e].rows.back().dist_to_opt << "\n";
      }
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ParameterError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "validation failed: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
