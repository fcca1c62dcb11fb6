#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace svlasov {

/// Uniform tensor grid on the periodic torus x in [0,1) times the truncated
/// velocity interval [-vmax, vmax].
///
/// x nodes are i*dx for i = 0..nx-1 (no duplicated periodic endpoint).
/// v nodes are -vmax + j*dv for j = 0..nv-1 and include both endpoints, so
/// dv = 2*vmax/(nv-1).
struct PhaseGrid {
  int nx = 0;
  int nv = 0;
  double vmax = 0.0;
  double dx = 0.0;
  double dv = 0.0;

  double x(int i) const { return i * dx; }
  double v(int j) const { return -vmax + j * dv; }
  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(nv); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * nv + j; }

  friend bool operator==(const PhaseGrid&, const PhaseGrid&) = default;
};

/// Throws std::invalid_argument unless nx >= 2, nv >= 2 and vmax is finite and positive.
PhaseGrid build_grid(int nx, int nv, double vmax);

/// Real samples f(x_i, v_j), stored row-major with i (x) outer and j (v) inner.
class Field {
 public:
  Field() = default;
  explicit Field(const PhaseGrid& grid, double fill = 0.0);
  Field(const PhaseGrid& grid, std::vector<double> values);

  const PhaseGrid& grid() const { return grid_; }

  double& operator()(int i, int j) { return values_[grid_.index(i, j)]; }
  double operator()(int i, int j) const { return values_[grid_.index(i, j)]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  /// Contiguous v-column at fixed x_i.
  std::span<double> row(int i) { return {values_.data() + grid_.index(i, 0), static_cast<std::size_t>(grid_.nv)}; }
  std::span<const double> row(int i) const {
    return {values_.data() + grid_.index(i, 0), static_cast<std::size_t>(grid_.nv)};
  }

  void swap(Field& other) noexcept {
    std::swap(grid_, other.grid_);
    values_.swap(other.values_);
  }

  friend bool operator==(const Field&, const Field&) = default;

 private:
  PhaseGrid grid_{};
  std::vector<double> values_;
};

/// Sentinel accepted by lp_norm for the sup norm.
inline constexpr double kInfNorm = std::numeric_limits<double>::infinity();

using PhaseFunction = std::function<double(double x, double v)>;

/// values[i][j] = g(x_i, v_j). A non-finite sample throws, naming the node.
Field sample_function(const PhaseGrid& grid, const PhaseFunction& g);

/// Riemann-sum (sum |f|^p dx dv)^(1/p); p == kInfNorm gives max |f|.
double lp_norm(const Field& f, double p);

/// Signed integral sum f dx dv.
double mass(const Field& f);

/// Squared L2 norm without the final square root.
double l2_squared(const Field& f);

double min_value(const Field& f);

}  // namespace svlasov
