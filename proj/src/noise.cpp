#include "svlasov/noise.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace svlasov {

std::string_view to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::additive: return "additive";
    case NoiseKind::mult_ito: return "mult_ito";
    case NoiseKind::mult_strato: return "mult_strato";
    case NoiseKind::transport: return "transport";
  }
  return "unknown";
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double indicator3(double v) { return std::abs(v) <= 3.0 ? 1.0 : 0.0; }

// Parses "<prefix>(<real>)"; returns nullopt when the prefix does not match.
std::optional<double> parse_call(std::string_view name, std::string_view prefix) {
  if (name.size() < prefix.size() + 2 || name.substr(0, prefix.size()) != prefix) return std::nullopt;
  if (name[prefix.size()] != '(' || name.back() != ')') return std::nullopt;
  const auto arg = name.substr(prefix.size() + 1, name.size() - prefix.size() - 2);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), value);
  if (ec != std::errc{} || ptr != arg.data() + arg.size() || !std::isfinite(value))
    throw std::invalid_argument("noise: bad numeric argument in '" + std::string(name) + "'");
  return value;
}

FieldOnX x_row(const Field& f) {
  FieldOnX row(f.grid(), 0.0);
  for (int i = 0; i < f.grid().nx; ++i) row[i] = f(i, 0);
  return row;
}

// splitmix64 finaliser.
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double unit_open(std::uint64_t bits) {
  // (0, 1]: never zero, so the logarithm below is finite.
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

// Increment of one component over the dyadic block [index * 2^level, (index + 1) * 2^level)
// of level-0 steps: the sum of its two half blocks, so every level is an
// exact sum of level-0 increments.
double block_sum(const IncrementStream& s, int component, int level, std::int64_t index) {
  if (level == 0)
    return std::sqrt(s.tau) * keyed_normal(s.master_seed, s.sample_index, static_cast<std::uint64_t>(index),
                                           static_cast<std::uint64_t>(component));
  return block_sum(s, component, level - 1, 2 * index) + block_sum(s, component, level - 1, 2 * index + 1);
}

}  // namespace

NoiseSpec builtin_sigma(std::string_view name, const PhaseGrid& grid, NoiseKind kind) {
  NoiseSpec spec;
  spec.kind = kind;
  spec.name = std::string(name);
  bool x_only = false;

  auto add = [&](const PhaseFunction& g) { spec.sigma.push_back(sample_function(grid, g)); };

  if (name == "cos_v3") {
    add([](double, double v) { return std::cos(v) * indicator3(v); });
  } else if (name == "sin_v3") {
    add([](double, double v) { return std::sin(v) * indicator3(v); });
  } else if (name == "half_sin_v3") {
    add([](double, double v) { return 0.5 * std::sin(v) * indicator3(v); });
  } else if (name == "gauss_pair") {
    add([](double x, double v) { return 0.5 * std::exp(-v * v / 2.0) * std::cos(kTwoPi * x); });
    add([](double x, double v) { return 0.5 * std::exp(-v * v / 2.0) * std::sin(kTwoPi * x); });
  } else if (name == "cos_sin_pair") {
    add([](double x, double) { return std::cos(kTwoPi * x); });
    add([](double x, double) { return std::sin(kTwoPi * x); });
    x_only = true;
  } else if (auto c = parse_call(name, "const")) {
    add([value = *c](double, double) { return value; });
    x_only = true;
  } else if (auto tc = parse_call(name, "transport_const")) {
    if (kind != NoiseKind::transport)
      throw std::invalid_argument("noise: transport_const requires the transport scheme");
    add([value = *tc](double, double) { return value; });
    x_only = true;
  } else {
    throw std::invalid_argument("noise: unknown catalog name '" + std::string(name) + "'");
  }

  if (kind == NoiseKind::transport) {
    if (!x_only) throw std::invalid_argument("noise: '" + std::string(name) + "' depends on v; transport needs x-only coefficients");
    for (const auto& f : spec.sigma) spec.sigma_x.push_back(x_row(f));
    spec.sigma.clear();
  }
  return spec;
}

std::optional<double> check_sigma_constant(const NoiseSpec& spec, double tol) {
  std::vector<double> total;
  if (spec.kind == NoiseKind::transport) {
    if (spec.sigma_x.empty()) return std::nullopt;
    total.assign(spec.sigma_x.front().size(), 0.0);
    for (const auto& s : spec.sigma_x)
      for (std::size_t i = 0; i < total.size(); ++i) total[i] += s[i] * s[i];
  } else {
    if (spec.sigma.empty()) return std::nullopt;
    total.assign(spec.sigma.front().values().size(), 0.0);
    for (const auto& s : spec.sigma) {
      const auto v = s.values();
      for (std::size_t i = 0; i < total.size(); ++i) total[i] += v[i] * v[i];
    }
  }
  std::vector<double> sorted = total;
  const auto mid = sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2);
  std::nth_element(sorted.begin(), mid, sorted.end());
  const double median = *mid;
  for (double t : total)
    if (std::abs(t - median) > tol) return std::nullopt;
  return median;
}

double keyed_normal(std::uint64_t seed, std::uint64_t sample, std::uint64_t step, std::uint64_t component) {
  std::uint64_t h = mix(seed ^ 0x5bd1e9955bd1e995ULL);
  h = mix(h ^ sample);
  h = mix(h ^ step);
  h = mix(h ^ component);
  const double u1 = unit_open(mix(h ^ 0x2545f4914f6cdd1dULL));
  const double u2 = unit_open(mix(h ^ 0x3c6ef372fe94f82bULL));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

double IncrementStream::step() const { return std::ldexp(tau, level); }

void draw_increments(const IncrementStream& stream, std::int64_t n, std::span<double> out) {
  if (n < 0) throw std::invalid_argument("draw_increments: negative step index");
  if (out.size() != static_cast<std::size_t>(stream.components))
    throw std::invalid_argument("draw_increments: output size differs from component count");
  for (int k = 0; k < stream.components; ++k) out[k] = block_sum(stream, k, stream.level, n);
}

std::vector<double> draw_increments(const IncrementStream& stream, std::int64_t n) {
  std::vector<double> out(static_cast<std::size_t>(stream.components));
  draw_increments(stream, n, out);
  return out;
}

IncrementStream coarsen(const IncrementStream& stream, std::int64_t factor) {
  if (factor < 1 || (factor & (factor - 1)) != 0)
    throw std::invalid_argument("coarsen: factor must be a power of two");
  IncrementStream out = stream;
  out.level += std::countr_zero(static_cast<std::uint64_t>(factor));
  return out;
}

std::vector<double> path_value(const IncrementStream& stream, std::int64_t n_steps) {
  if (n_steps < 0) throw std::invalid_argument("path_value: negative step count");
  std::vector<double> beta(static_cast<std::size_t>(stream.components), 0.0);
  for (int k = 0; k < stream.components; ++k) {
    // Aligned blocks in level-0 units, largest first.
    const std::uint64_t fine = static_cast<std::uint64_t>(n_steps) << stream.level;
    std::uint64_t start = 0;
    double total = 0.0;
    for (int b = 63; b >= 0; --b) {
      if (((fine >> b) & 1u) == 0) continue;
      total += block_sum(stream, k, b, static_cast<std::int64_t>(start >> b));
      start += std::uint64_t{1} << b;
    }
    beta[k] = total;
  }
  return beta;
}

}  // namespace svlasov
