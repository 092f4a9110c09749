#include "mascope/experiments/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace mascope::experiments {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view text, std::size_t line, std::string_view key) {
  T out{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParameterError("config line " + std::to_string(line) + ": bad value for '" + std::string(key) + "'");
  }
  return out;
}

}  // namespace

ConfigFile parse_config(std::string_view text) {
  ConfigFile cfg;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParameterError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view val = trim(line.substr(eq + 1));
    auto bad = [&] {
      return ParameterError("config line " + std::to_string(line_no) + ": bad value for '" + std::string(key) + "'");
    };
    auto& p = cfg.params;
    if (key == "scenario") {
      cfg.scenario = std::string(val);
    } else if (key == "engine") {
      p.engine = parse_engine(val);
      if (!p.engine) throw bad();
    } else if (key == "seed") {
      p.seed = parse_number<std::uint64_t>(val, line_no, key);
    } else if (key == "iters") {
      p.iterations = parse_number<std::size_t>(val, line_no, key);
    } else if (key == "step.kind") {
      p.step_kind = parse_step_kind(val);
      if (!p.step_kind) throw bad();
    } else if (key == "step.scale") {
      p.step_scale = parse_number<double>(val, line_no, key);
      if (!(*p.step_scale > 0)) throw bad();
    } else if (key == "network.kind") {
      if (!parse_network(val, std::nullopt)) throw bad();
      p.network_kind = std::string(val);
    } else if (key == "network.d") {
      p.network_d = parse_number<double>(val, line_no, key);
    } else if (key == "log.stride") {
      if (val == "geometric") {
        p.stride = LogStride::geometric();
      } else {
        const auto s = parse_number<std::size_t>(val, line_no, key);
        if (s == 0) throw bad();
        p.stride = LogStride::each(s);
      }
    } else {
      throw ParameterError("config line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    }
  }
  return cfg;
}

ConfigFile load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace mascope::experiments
