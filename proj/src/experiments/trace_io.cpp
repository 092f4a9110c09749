#include "mascope/experiments/trace_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace mascope::experiments {

namespace {

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string f2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

}  // namespace

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string format_csv(const std::vector<MetricRow>& rows) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.k);
    for (double v : {r.consensus_residual, r.dist_to_opt, r.rel_gap_iter, r.rel_gap_ravg, r.epsilon, r.max_err}) {
      out += ',';
      out += g17(v);
    }
    out += '\n';
  }
  return out;
}

std::string format_meta(const TraceMeta& meta) {
  std::ostringstream out;
  out << "scenario = " << meta.scenario << '\n'
      << "seed = " << meta.seed << '\n'
      << "engine = " << meta.engine << '\n'
      << "schedule = " << meta.schedule << '\n'
      << "iters = " << meta.iterations << '\n'
      << "step = " << meta.step << '\n'
      << "log.stride = " << meta.stride << '\n'
      << "rel_gap = " << (meta.relative_gap_is_absolute ? "absolute" : "relative") << '\n';
  if (meta.engine == "prox") out << "prox_inner_failures = " << meta.prox_inner_failures << '\n';
  return out.str();
}

void emit_csv(const RunTrace& trace, const std::filesystem::path& path) { write_file(path, format_csv(trace.rows)); }

void emit_meta(const TraceMeta& meta, const std::filesystem::path& path) { write_file(path, format_meta(meta)); }

std::string format_svg(const std::vector<SvgSeries>& series, const std::string& title, const std::string& y_label) {
  constexpr double width = 800, height = 600;
  constexpr double left = 80, right = 20, top = 40, bottom = 60;
  const double pw = width - left - right, ph = height - top - bottom;

  std::vector<std::vector<std::pair<double, double>>> logs;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& [k, v] : s.points) {
      if (!(k > 0) || !(v > 0) || !std::isfinite(v)) continue;
      const double lx = std::log10(k), ly = std::log10(v);
      pts.emplace_back(lx, ly);
      xmin = std::min(xmin, lx);
      xmax = std::max(xmax, lx);
      ymin = std::min(ymin, ly);
      ymax = std::max(ymax, ly);
    }
    logs.push_back(std::move(pts));
  }
  if (!(xmin <= xmax)) {
    xmin = 0;
    xmax = 1;
    ymin = 0;
    ymax = 1;
  }
  xmin = std::floor(xmin);
  xmax = std::max(std::ceil(xmax), xmin + 1);
  ymin = std::floor(ymin);
  ymax = std::max(std::ceil(ymax), ymin + 1);
  auto px = [&](double lx) { return left + (lx - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double ly) { return top + (ymax - ly) / (ymax - ymin) * ph; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
  out << "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
      << escape_xml(title) << "</text>\n";
  out << "<rect x=\"" << f2(left) << "\" y=\"" << f2(top) << "\" width=\"" << f2(pw) << "\" height=\"" << f2(ph)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double d = xmin; d <= xmax + 0.5; d += 1) {
    out << "<line x1=\"" << f2(px(d)) << "\" y1=\"" << f2(top) << "\" x2=\"" << f2(px(d)) << "\" y2=\""
        << f2(top + ph) << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << f2(px(d)) << "\" y=\"" << f2(top + ph + 18)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">1e" << static_cast<int>(d)
        << "</text>\n";
  }
  for (double d = ymin; d <= ymax + 0.5; d += 1) {
    out << "<line x1=\"" << f2(left) << "\" y1=\"" << f2(py(d)) << "\" x2=\"" << f2(left + pw) << "\" y2=\""
        << f2(py(d)) << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << f2(left - 6) << "\" y=\"" << f2(py(d) + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">1e" << static_cast<int>(d)
        << "</text>\n";
  }
  out << "<text x=\"400\" y=\"" << f2(height - 12)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">k</text>\n";
  out << "<text x=\"18\" y=\"300\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 18 300)\">"
      << escape_xml(y_label) << "</text>\n";

  for (std::size_t s = 0; s < logs.size(); ++s) {
    const char* colour = kPalette[s % std::size(kPalette)];
    if (!logs[s].empty()) {
      out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t p = 0; p < logs[s].size(); ++p) {
        if (p) out << ' ';
        out << f2(px(logs[s][p].first)) << ',' << f2(py(logs[s][p].second));
      }
      out << "\"/>\n";
    }
    const double ly = top + 16 + 18 * static_cast<double>(s);
    out << "<line x1=\"" << f2(left + pw - 200) << "\" y1=\"" << f2(ly) << "\" x2=\"" << f2(left + pw - 176)
        << "\" y2=\"" << f2(ly) << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << f2(left + pw - 170) << "\" y=\"" << f2(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape_xml(series[s].label) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void emit_svg(const std::vector<SvgSeries>& series, const std::string& title, const std::string& y_label,
              const std::filesystem::path& path) {
  write_file(path, format_svg(series, title, y_label));
}

}  // namespace mascope::experiments
