#include "svlasov/operators.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>
#include <stdexcept>

#include "svlasov/interp.hpp"

namespace svlasov {

namespace {

void require_finite(double t, const char* where) {
  if (!std::isfinite(t)) throw std::domain_error(std::string(where) + ": non-finite time step");
}

void require_row_count(const Field& f, std::size_t n, const char* where) {
  if (n != static_cast<std::size_t>(f.grid().nx))
    throw std::invalid_argument(std::string(where) + ": x-function length does not match grid");
}

void prepare_output(const Field& f, Field& out) {
  if (out.grid() != f.grid() || out.values().size() != f.values().size()) out = Field(f.grid());
}

}  // namespace

FieldOnX sample_on_x(const PhaseGrid& grid, double (*g)(double)) {
  FieldOnX out(grid, 0.0);
  for (int i = 0; i < grid.nx; ++i) {
    out[i] = g(grid.x(i));
    if (!std::isfinite(out[i])) throw std::domain_error("sample_on_x: non-finite sample");
  }
  return out;
}

void apply_S1_into(const Field& f, double t, Field& out) {
  require_finite(t, "apply_S1");
  prepare_output(f, out);
  const auto& g = f.grid();
  const int nx = g.nx;
  const int nv = g.nv;

  // The foot point of x_i is x_i - t v_j, i.e. index i + offset_j.
  std::vector<int> base(nv);
  std::vector<double> weight(nv);
  for (int j = 0; j < nv; ++j) {
    const CellWeight c = locate(std::fmod(-t * g.v(j) * nx, static_cast<double>(nx)));
    long b = c.base % nx;
    if (b < 0) b += nx;
    base[j] = static_cast<int>(b);
    weight[j] = c.weight;
  }

  const double* in = f.values().data();
  double* dst = out.values().data();
  for (int i = 0; i < nx; ++i) {
    double* row = dst + static_cast<std::size_t>(i) * nv;
    for (int j = 0; j < nv; ++j) {
      int r0 = i + base[j];
      if (r0 >= nx) r0 -= nx;
      const double a = in[static_cast<std::size_t>(r0) * nv + j];
      const double w = weight[j];
      if (w == 0.0) {
        row[j] = a;
        continue;
      }
      const int r1 = r0 + 1 == nx ? 0 : r0 + 1;
      row[j] = (1.0 - w) * a + w * in[static_cast<std::size_t>(r1) * nv + j];
    }
  }
}

Field apply_S1(const Field& f, double t) {
  Field out(f.grid());
  apply_S1_into(f, t, out);
  return out;
}

void apply_vshift_into(const Field& f, std::span<const double> shift, Field& out) {
  require_row_count(f, shift.size(), "apply_vshift");
  prepare_output(f, out);
  const auto& g = f.grid();
  const int nv = g.nv;
  for (int i = 0; i < g.nx; ++i) {
    if (!std::isfinite(shift[i])) throw std::domain_error("apply_vshift: non-finite shift");
    // Shifts beyond the whole velocity range empty the row.
    const double limit = nv + 1.0;
    const CellWeight c = locate(std::clamp(-shift[i] / g.dv, -limit, limit));
    const auto src = f.row(i);
    auto dst = out.row(i);
    const long b = c.base;
    const double w = c.weight;
    // Valid source positions j + b + w lie in [0, nv - 1].
    const long last = w == 0.0 ? nv - 1 : nv - 2;
    long lo = -b;
    long hi = last - b;
    if (lo < 0) lo = 0;
    if (hi > nv - 1) hi = nv - 1;
    for (long j = 0; j < std::min<long>(lo, nv); ++j) dst[j] = 0.0;
    if (w == 0.0) {
      for (long j = lo; j <= hi; ++j) dst[j] = src[j + b];
    } else {
      const double w0 = 1.0 - w;
      for (long j = lo; j <= hi; ++j) dst[j] = w0 * src[j + b] + w * src[j + b + 1];
    }
    for (long j = std::max(hi + 1, lo); j < nv; ++j) dst[j] = 0.0;
  }
}

Field apply_vshift(const Field& f, const FieldOnX& shift) {
  Field out(f.grid());
  apply_vshift_into(f, shift.values, out);
  return out;
}

void apply_S2_into(const Field& f, double t, const FieldOnX& E, Field& out) {
  require_finite(t, "apply_S2");
  require_row_count(f, E.size(), "apply_S2");
  std::vector<double> shift(E.size());
  for (std::size_t i = 0; i < E.size(); ++i) shift[i] = t * E[i];
  apply_vshift_into(f, shift, out);
}

Field apply_S2(const Field& f, double t, const FieldOnX& E) {
  Field out(f.grid());
  apply_S2_into(f, t, E, out);
  return out;
}

Field apply_det_step(const Field& f, double tau, const FieldOnX& E) {
  if (!(tau > 0.0 && tau < 1.0)) {
    static std::once_flag warned;
    std::call_once(warned, [tau] { std::cerr << "warning: time step " << tau << " outside (0, 1)\n"; });
  }
  Field half = apply_S1(f, tau);
  return apply_S2(half, tau, E);
}

Field apply_pointwise_factor(const Field& f, const Field& g) {
  if (f.grid() != g.grid()) throw std::invalid_argument("apply_pointwise_factor: grid mismatch");
  Field out(f.grid());
  const auto a = f.values();
  const auto b = g.values();
  auto dst = out.values();
  for (std::size_t k = 0; k < a.size(); ++k) dst[k] = a[k] * b[k];
  return out;
}

}  // namespace svlasov
