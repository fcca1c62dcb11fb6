#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "svlasov/grid.hpp"
#include "svlasov/noise.hpp"
#include "svlasov/operators.hpp"

namespace svlasov {

enum class Scheme { deterministic, additive, mult_ito, mult_strato, transport };

std::string_view to_string(Scheme scheme);
std::optional<Scheme> parse_scheme(std::string_view name);

/// Noise kind a stochastic scheme expects; nullopt for the deterministic scheme.
std::optional<NoiseKind> noise_kind_for(Scheme scheme);

struct SchemeState {
  Field field;
  std::int64_t step = 0;
  double tau = 0.0;

  double time() const { return static_cast<double>(step) * tau; }
};

SchemeState step_deterministic(const SchemeState& s, const FieldOnX& E);

/// f <- S2 S1 f + sum_k dbeta_k sigma_k
SchemeState step_additive(const SchemeState& s, const FieldOnX& E, const NoiseSpec& spec,
                          std::span<const double> dbeta);

/// f <- exp(sum_k sigma_k dbeta_k - tau/2 sum_k sigma_k^2) S2 S1 f
SchemeState step_mult_ito(const SchemeState& s, const FieldOnX& E, const NoiseSpec& spec,
                          std::span<const double> dbeta);

/// f <- exp(sum_k sigma_k dbeta_k) S2 S1 f
SchemeState step_mult_strato(const SchemeState& s, const FieldOnX& E, const NoiseSpec& spec,
                             std::span<const double> dbeta);

/// f <- T(sum_k dbeta_k sigma_k) S2 S1 f, the velocity shift applied in one pass.
SchemeState step_transport(const SchemeState& s, const FieldOnX& E, const NoiseSpec& spec,
                           std::span<const double> dbeta);

/// Reusable in-place stepper for one scheme on one grid: holds the
/// interpolation scratch buffer and the noise data precomputed for a fixed
/// step size. Not thread-safe; use one per trajectory.
class Stepper {
 public:
  Stepper(Scheme scheme, const FieldOnX& E, const NoiseSpec* noise, double tau);

  /// Advances f by one step; dbeta is ignored by the deterministic scheme.
  void advance(Field& f, std::span<const double> dbeta);

  Scheme scheme() const { return scheme_; }
  double tau() const { return tau_; }
  int components() const { return noise_ ? noise_->components() : 0; }

 private:
  void noise_action(Field& f, std::span<const double> dbeta);

  Scheme scheme_;
  FieldOnX E_;
  const NoiseSpec* noise_;
  double tau_;
  Field scratch_;
  std::vector<double> drift_;  // tau/2 sum_k sigma_k^2 per node (Ito only)
  std::vector<double> shift_;
};

using StepObserver = std::function<void(const SchemeState&)>;

/// Iterates the scheme for n_steps with the step size stream.step(), drawing
/// increments from the stream. The observer sees the state after every step,
/// including the initial one.
SchemeState run(Scheme scheme, const Field& f0, const FieldOnX& E, const NoiseSpec* noise,
                const IncrementStream& stream, std::int64_t n_steps, const StepObserver& observer = {});

}  // namespace svlasov
