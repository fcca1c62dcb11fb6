#include "svlasov/grid.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>

namespace svlasov {

namespace {

// Exact binned accumulator: every double is split into its 53-bit integer
// mantissa and binary exponent, and mantissas are added into one integer bin
// per exponent. Bin contents do not depend on the order of the terms, so the
// final sum is identical for any permutation of the input.
class OrderFreeSum {
 public:
  void add(double value) {
    const auto bits = std::bit_cast<std::uint64_t>(value);
    const bool negative = (bits >> 63) != 0;
    const int exponent = static_cast<int>((bits >> 52) & 0x7ff);
    std::int64_t mantissa = static_cast<std::int64_t>(bits & ((std::uint64_t{1} << 52) - 1));
    if (exponent != 0) mantissa |= std::int64_t{1} << 52;
    bins_[exponent] += negative ? -static_cast<__int128>(mantissa) : static_cast<__int128>(mantissa);
  }

  double value() const {
    long double total = 0.0L;
    for (int e = 0; e < 2048; ++e) {
      if (bins_[e] == 0) continue;
      // Subnormals share the scale of exponent field 1.
      const int scale = std::max(e, 1) - 1075;
      total += std::ldexp(static_cast<long double>(bins_[e]), scale);
    }
    return static_cast<double>(total);
  }

 private:
  std::array<__int128, 2048> bins_{};
};

double integer_power(double base, unsigned exponent) {
  double result = 1.0;
  while (exponent != 0) {
    if (exponent & 1u) result *= base;
    base *= base;
    exponent >>= 1;
  }
  return result;
}

}  // namespace

PhaseGrid build_grid(int nx, int nv, double vmax) {
  if (nx < 2 || nv < 2) throw std::invalid_argument("build_grid: nx and nv must be >= 2");
  if (!std::isfinite(vmax) || vmax <= 0.0) throw std::invalid_argument("build_grid: vmax must be finite and > 0");
  PhaseGrid g;
  g.nx = nx;
  g.nv = nv;
  g.vmax = vmax;
  g.dx = 1.0 / nx;
  g.dv = 2.0 * vmax / (nv - 1);
  return g;
}

Field::Field(const PhaseGrid& grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

Field::Field(const PhaseGrid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw std::invalid_argument("Field: value count does not match grid");
}

Field sample_function(const PhaseGrid& grid, const PhaseFunction& g) {
  Field f(grid);
  for (int i = 0; i < grid.nx; ++i) {
    const double x = grid.x(i);
    for (int j = 0; j < grid.nv; ++j) {
      const double value = g(x, grid.v(j));
      if (!std::isfinite(value)) {
        std::ostringstream msg;
        msg << "sample_function: non-finite value at node (i=" << i << ", j=" << j << ", x=" << x
            << ", v=" << grid.v(j) << ")";
        throw std::domain_error(msg.str());
      }
      f(i, j) = value;
    }
  }
  return f;
}

double lp_norm(const Field& f, double p) {
  if (std::isnan(p) || p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
  const auto values = f.values();
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  const double cell = f.grid().dx * f.grid().dv;
  OrderFreeSum sum;
  if (p == 1.0) {
    for (double v : values) sum.add(std::abs(v));
    return sum.value() * cell;
  }
  if (p == 2.0) {
    for (double v : values) sum.add(v * v);
    return std::sqrt(sum.value() * cell);
  }
  // Normalise by the sup norm so large p neither overflows nor underflows.
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  if (m == 0.0) return 0.0;
  const bool integral = p == std::floor(p) && p < 4096.0;
  for (double v : values) {
    const double r = std::abs(v) / m;
    sum.add(integral ? integer_power(r, static_cast<unsigned>(p)) : std::pow(r, p));
  }
  return m * std::pow(sum.value() * cell, 1.0 / p);
}

double mass(const Field& f) {
  OrderFreeSum sum;
  for (double v : f.values()) sum.add(v);
  return sum.value() * (f.grid().dx * f.grid().dv);
}

double l2_squared(const Field& f) {
  OrderFreeSum sum;
  for (double v : f.values()) sum.add(v * v);
  return sum.value() * (f.grid().dx * f.grid().dv);
}

double min_value(const Field& f) {
  const auto values = f.values();
  if (values.empty()) return 0.0;
  return *std::min_element(values.begin(), values.end());
}

}  // namespace svlasov
