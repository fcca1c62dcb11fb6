#include "svlasov/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "svlasov/montecarlo.hpp"
#include "svlasov/noise.hpp"

namespace svlasov {

ConfigError::ConfigError(int line, const std::string& message)
    : std::runtime_error(line > 0 ? "config line " + std::to_string(line) + ": " + message : "config: " + message),
      line_(line) {}

std::int64_t ExperimentConfig::n_steps() const { return step_count(T, tau); }

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(std::string_view text, int line, std::string_view key) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ConfigError(line, "bad value '" + std::string(text) + "' for " + std::string(key));
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) throw ConfigError(line, "non-finite value for " + std::string(key));
  }
  return value;
}

std::vector<double> parse_list(std::string_view text, int line, std::string_view key) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    const auto item = trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    out.push_back(parse_number<double>(item, line, key));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

void check(const ExperimentConfig& c, const std::map<std::string, int>& lines) {
  auto line_of = [&](const std::string& key) {
    const auto it = lines.find(key);
    return it == lines.end() ? 0 : it->second;
  };
  if (c.nx < 2) throw ConfigError(line_of("nx"), "nx must be >= 2");
  if (c.nv < 2) throw ConfigError(line_of("nv"), "nv must be >= 2");
  if (!(c.vmax > 0.0)) throw ConfigError(line_of("vmax"), "vmax must be > 0");
  if (!(c.tau > 0.0)) throw ConfigError(line_of("tau"), "tau must be > 0");
  if (c.T < 0.0) throw ConfigError(line_of("T"), "T must be >= 0");
  if (c.samples < 1) throw ConfigError(line_of("samples"), "samples must be >= 1");
  if (c.threads < 0) throw ConfigError(line_of("threads"), "threads must be >= 0");
  try {
    (void)step_count(c.T, c.tau);
  } catch (const std::invalid_argument&) {
    throw ConfigError(line_of("T"), "T = " + std::to_string(c.T) + " is not an integer number of steps of tau = " +
                                        std::to_string(c.tau));
  }
  for (double t : c.snapshot_times) {
    try {
      if (step_count(t, c.tau) > step_count(c.T, c.tau)) throw std::invalid_argument("late");
    } catch (const std::invalid_argument&) {
      throw ConfigError(line_of("snapshot_times"), "snapshot time " + std::to_string(t) + " is not a step time in [0, T]");
    }
  }
  for (double p : c.extra_p)
    if (p < 1.0) throw ConfigError(line_of("extra_p"), "norm exponents must be >= 1");
  if (c.tau_ref < 0.0) throw ConfigError(line_of("tau_ref"), "tau_ref must be > 0");
  for (double t : c.tau_set)
    if (!(t > 0.0)) throw ConfigError(line_of("tau_set"), "tau_set entries must be > 0");

  if (auto kind = noise_kind_for(c.scheme)) {
    if (c.noise.empty()) throw ConfigError(line_of("scheme"), "scheme " + std::string(to_string(c.scheme)) + " needs a noise");
    try {
      (void)builtin_sigma(c.noise, build_grid(2, 2, 1.0), *kind);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(line_of("noise"), e.what());
    }
  }
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig c;
  std::map<std::string, int> lines;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const auto value = trim(line.substr(eq + 1));
    if (lines.count(key)) throw ConfigError(line_no, "duplicate key '" + key + "'");
    lines[key] = line_no;

    if (key == "scheme") {
      auto s = parse_scheme(value);
      if (!s) throw ConfigError(line_no, "unknown scheme '" + std::string(value) + "'");
      c.scheme = *s;
    } else if (key == "noise") {
      c.noise = std::string(value);
    } else if (key == "nx") {
      c.nx = parse_number<int>(value, line_no, key);
    } else if (key == "nv") {
      c.nv = parse_number<int>(value, line_no, key);
    } else if (key == "vmax") {
      c.vmax = parse_number<double>(value, line_no, key);
    } else if (key == "tau") {
      c.tau = parse_number<double>(value, line_no, key);
    } else if (key == "T") {
      c.T = parse_number<double>(value, line_no, key);
    } else if (key == "samples") {
      c.samples = parse_number<std::int64_t>(value, line_no, key);
    } else if (key == "seed") {
      c.seed = parse_number<std::uint64_t>(value, line_no, key);
    } else if (key == "threads") {
      c.threads = parse_number<int>(value, line_no, key);
    } else if (key == "snapshot_times") {
      c.snapshot_times = parse_list(value, line_no, key);
    } else if (key == "extra_p") {
      c.extra_p = parse_list(value, line_no, key);
    } else if (key == "tau_ref") {
      c.tau_ref = parse_number<double>(value, line_no, key);
    } else if (key == "tau_set") {
      c.tau_set = parse_list(value, line_no, key);
    } else if (key == "out") {
      c.out = std::string(value);
    } else {
      throw ConfigError(line_no, "unknown key '" + key + "'");
    }
  }
  check(c, lines);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

void validate_config(const ExperimentConfig& config) { check(config, {}); }

}  // namespace svlasov
