#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "svlasov/grid.hpp"
#include "svlasov/operators.hpp"

namespace svlasov {

enum class NoiseKind { additive, mult_ito, mult_strato, transport };

std::string_view to_string(NoiseKind kind);

/// Noise type together with its K diffusion coefficients sampled on the grid.
/// Phase-space kinds carry sigma_k(x, v) in `sigma`; the transport kind
/// carries the x-only rows sigma_{1,k}(x) in `sigma_x`.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::additive;
  std::string name;
  std::vector<Field> sigma;
  std::vector<FieldOnX> sigma_x;

  int components() const {
    return static_cast<int>(kind == NoiseKind::transport ? sigma_x.size() : sigma.size());
  }
};

/// Catalog lookup. Accepted names: cos_v3, sin_v3, half_sin_v3, gauss_pair,
/// cos_sin_pair, const(c), transport_const(c). Names whose coefficients vary
/// with v are rejected for the transport kind; transport_const is accepted
/// only for the transport kind. Throws std::invalid_argument otherwise.
NoiseSpec builtin_sigma(std::string_view name, const PhaseGrid& grid, NoiseKind kind = NoiseKind::additive);

/// The constant sum_k sigma_k^2 when it deviates from its median by at most
/// tol at every node.
std::optional<double> check_sigma_constant(const NoiseSpec& spec, double tol);

/// Counter-based description of the Wiener increments of one Monte Carlo
/// sample. Level-0 increments over steps of size `tau` are independent
/// N(0, tau) draws keyed by (master_seed, sample_index, step, component).
/// A level-l stream has steps of size tau * 2^l whose increments are exact
/// dyadic sums of level-0 increments.
struct IncrementStream {
  std::uint64_t master_seed = 0;
  std::uint64_t sample_index = 0;
  int components = 1;
  double tau = 0.0;
  int level = 0;

  double step() const;
};

/// Fills out[k] with the increment of component k over step n.
void draw_increments(const IncrementStream& stream, std::int64_t n, std::span<double> out);
std::vector<double> draw_increments(const IncrementStream& stream, std::int64_t n);

/// Stream whose increments are sums of `factor` consecutive increments of
/// `stream`. factor must be a power of two.
IncrementStream coarsen(const IncrementStream& stream, std::int64_t factor);

/// beta_k(n * stream.step()) summed over aligned dyadic blocks, which makes
/// the value bitwise identical at every level describing the same path.
std::vector<double> path_value(const IncrementStream& stream, std::int64_t n_steps);

/// Standard normal variate keyed by the four counters.
double keyed_normal(std::uint64_t seed, std::uint64_t sample, std::uint64_t step, std::uint64_t component);

}  // namespace svlasov
