#pragma once

#include <span>
#include <vector>

#include "svlasov/grid.hpp"

namespace svlasov {

/// A function of x sampled at the x nodes, e.g. the force field E or a
/// transport coefficient.
struct FieldOnX {
  std::vector<double> values;

  FieldOnX() = default;
  explicit FieldOnX(std::vector<double> v) : values(std::move(v)) {}
  FieldOnX(const PhaseGrid& grid, double fill) : values(static_cast<std::size_t>(grid.nx), fill) {}

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
};

/// Samples g(x_i); throws on non-finite samples.
FieldOnX sample_on_x(const PhaseGrid& grid, double (*g)(double));

/// out(x, v) = f(x - t v, v), periodic linear interpolation per v node.
Field apply_S1(const Field& f, double t);
void apply_S1_into(const Field& f, double t, Field& out);

/// out(x, v) = f(x, v - t E(x)), linear interpolation per x node, zero outside [-vmax, vmax].
Field apply_S2(const Field& f, double t, const FieldOnX& E);
void apply_S2_into(const Field& f, double t, const FieldOnX& E, Field& out);

/// One deterministic Lie-Trotter step S2(tau) S1(tau) f, realised as two
/// successive one-dimensional interpolation passes.
Field apply_det_step(const Field& f, double tau, const FieldOnX& E);

/// out(x_i, v) = f(x_i, v - shift[i]).
Field apply_vshift(const Field& f, const FieldOnX& shift);
void apply_vshift_into(const Field& f, std::span<const double> shift, Field& out);

/// Entrywise product; throws on a grid mismatch.
Field apply_pointwise_factor(const Field& f, const Field& g);

}  // namespace svlasov
