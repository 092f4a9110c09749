#include "mascope/experiments/driver.hpp"

#include <sstream>

namespace mascope::experiments {

namespace {

double field(const MetricRow& r, PlotMetric metric) {
  switch (metric) {
    case PlotMetric::dist_to_opt:
      return r.dist_to_opt;
    case PlotMetric::rel_gap_iter:
      return r.rel_gap_iter;
    case PlotMetric::rel_gap_ravg:
      return r.rel_gap_ravg;
    case PlotMetric::consensus_residual:
      return r.consensus_residual;
  }
  return 0;
}

std::string stem(const ScenarioInstance& inst) {
  return inst.name + "_" + std::string(to_string(inst.config.engine));
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
}

}  // namespace

SvgSeries series_for(const RunTrace& trace, PlotMetric metric, std::string label) {
  SvgSeries s{std::move(label), {}};
  for (const auto& r : trace.rows) s.points.emplace_back(static_cast<double>(r.k), field(r, metric));
  return s;
}

TraceMeta meta_for(const ScenarioInstance& inst, const RunTrace& trace) {
  const auto& cfg = inst.config;
  std::ostringstream step;
  step << to_string(cfg.steps.kind) << " scale " << cfg.steps.scale;
  return TraceMeta{inst.name,
                   cfg.seed,
                   std::string(to_string(cfg.engine)),
                   inst.schedule_descriptor,
                   cfg.iterations,
                   step.str(),
                   cfg.stride.describe(),
                   trace.relative_gap_is_absolute,
                   trace.prox_inner_failures};
}

RunTrace run_and_emit(const ScenarioInstance& inst, const std::filesystem::path& dir) {
  ensure_dir(dir);
  RunTrace trace = run(inst.config);
  const std::string base = stem(inst);
  emit_csv(trace, dir / (base + ".csv"));
  emit_meta(meta_for(inst, trace), dir / (base + ".meta"));
  emit_svg({series_for(trace, inst.plot, base)}, inst.name, std::string(to_string(inst.plot)), dir / (base + ".svg"));
  return trace;
}

std::vector<RunTrace> compare_and_emit(const ScenarioInstance& inst, const std::vector<EngineKind>& engines,
                                       const std::filesystem::path& dir) {
  std::vector<RunTrace> traces;
  std::vector<SvgSeries> series;
  for (EngineKind e : engines) {
    ScenarioInstance copy = inst;
    copy.config.engine = e;
    traces.push_back(run_and_emit(copy, dir));
    series.push_back(series_for(traces.back(), inst.plot, std::string(to_string(e))));
  }
  emit_svg(series, inst.name, std::string(to_string(inst.plot)), dir / (inst.name + "_compare.svg"));
  return traces;
}

}  // namespace mascope::experiments
