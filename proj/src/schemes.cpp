#include "svlasov/schemes.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace svlasov {

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::deterministic: return "deterministic";
    case Scheme::additive: return "additive";
    case Scheme::mult_ito: return "mult_ito";
    case Scheme::mult_strato: return "mult_strato";
    case Scheme::transport: return "transport";
  }
  return "unknown";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
  for (Scheme s : {Scheme::deterministic, Scheme::additive, Scheme::mult_ito, Scheme::mult_strato, Scheme::transport})
    if (name == to_string(s)) return s;
  return std::nullopt;
}

std::optional<NoiseKind> noise_kind_for(Scheme scheme) {
  switch (scheme) {
    case Scheme::deterministic: return std::nullopt;
    case Scheme::additive: return NoiseKind::additive;
    case Scheme::mult_ito: return NoiseKind::mult_ito;
    case Scheme::mult_strato: return NoiseKind::mult_strato;
    case Scheme::transport: return NoiseKind::transport;
  }
  return std::nullopt;
}

Stepper::Stepper(Scheme scheme, const FieldOnX& E, const NoiseSpec* noise, double tau)
    : scheme_(scheme), E_(E), noise_(scheme == Scheme::deterministic ? nullptr : noise), tau_(tau) {
  if (!std::isfinite(tau)) throw std::domain_error("Stepper: non-finite time step");
  const auto kind = noise_kind_for(scheme);
  if (kind) {
    if (!noise_) throw std::invalid_argument("Stepper: scheme " + std::string(to_string(scheme)) + " needs a noise spec");
    if (noise_->kind != *kind)
      throw std::invalid_argument("Stepper: noise kind " + std::string(to_string(noise_->kind)) +
                                  " does not match scheme " + std::string(to_string(scheme)));
    if (noise_->components() < 1) throw std::invalid_argument("Stepper: noise needs K >= 1");
  }
  if (scheme_ == Scheme::mult_ito) {
    drift_.assign(noise_->sigma.front().values().size(), 0.0);
    for (const auto& s : noise_->sigma) {
      const auto v = s.values();
      for (std::size_t n = 0; n < drift_.size(); ++n) drift_[n] += v[n] * v[n];
    }
    for (double& d : drift_) d *= 0.5 * tau_;
  }
  if (scheme_ == Scheme::transport) shift_.assign(E_.size(), 0.0);
}

void Stepper::advance(Field& f, std::span<const double> dbeta) {
  if (E_.size() != static_cast<std::size_t>(f.grid().nx))
    throw std::invalid_argument("Stepper: force field length does not match grid");
  apply_S1_into(f, tau_, scratch_);
  apply_S2_into(scratch_, tau_, E_, f);
  if (noise_) noise_action(f, dbeta);
}

void Stepper::noise_action(Field& f, std::span<const double> dbeta) {
  const int K = noise_->components();
  if (dbeta.size() != static_cast<std::size_t>(K))
    throw std::invalid_argument("Stepper: expected " + std::to_string(K) + " increments");
  auto values = f.values();
  const std::size_t n = values.size();

  switch (scheme_) {
    case Scheme::additive:
      for (int k = 0; k < K; ++k) {
        const auto s = noise_->sigma[k].values();
        const double db = dbeta[k];
        for (std::size_t m = 0; m < n; ++m) values[m] += db * s[m];
      }
      break;
    case Scheme::mult_ito:
    case Scheme::mult_strato: {
      const bool ito = scheme_ == Scheme::mult_ito;
      const auto s0 = noise_->sigma[0].values();
      const double db0 = dbeta[0];
      for (std::size_t m = 0; m < n; ++m) {
        double exponent = s0[m] * db0;
        for (int k = 1; k < K; ++k) exponent += noise_->sigma[k].values()[m] * dbeta[k];
        if (ito) exponent -= drift_[m];
        values[m] *= std::exp(exponent);
      }
      break;
    }
    case Scheme::transport: {
      for (std::size_t i = 0; i < shift_.size(); ++i) {
        double total = 0.0;
        for (int k = 0; k < K; ++k) total += dbeta[k] * noise_->sigma_x[k][i];
        shift_[i] = total;
      }
      apply_vshift_into(f, shift_, scratch_);
      f.swap(scratch_);
      break;
    }
    case Scheme::deterministic:
      break;
  }
}

namespace {

SchemeState single_step(Scheme scheme, const SchemeState& s, const FieldOnX& E, const NoiseSpec* spec,
                        std::span<const double> dbeta) {
  Stepper stepper(scheme, E, spec, s.tau);
  SchemeState next{s.field, s.step + 1, s.tau};
  stepper.advance(next.field, dbeta);
  return next;
}

}  // namespace

SchemeState step_deterministic(const SchemeState& s, const FieldOnX& E) {
  return single_step(Scheme::deterministic, s, E, nullptr, {});
}

SchemeState step_additive(const SchemeState& s, const FieldOnX& E, const NoiseSpec& spec,
                          std::span<const double> dbeta) {
  return single_step(Scheme::additive, s, E, &spec, dbeta);
}

SchemeState step_mult_ito(const SchemeState& s, const FieldOnX& E, const NoiseSpec& spec,
                          std::span<const double> dbeta) {
  return single_step(Scheme::mult_ito, s, E, &spec, dbeta);
}

SchemeState step_mult_strato(const SchemeState& s, const FieldOnX& E, const NoiseSpec& spec,
                             std::span<const double> dbeta) {
  return single_step(Scheme::mult_strato, s, E, &spec, dbeta);
}

SchemeState step_transport(const SchemeState& s, const FieldOnX& E, const NoiseSpec& spec,
                           std::span<const double> dbeta) {
  return single_step(Scheme::transport, s, E, &spec, dbeta);
}

SchemeState run(Scheme scheme, const Field& f0, const FieldOnX& E, const NoiseSpec* noise,
                const IncrementStream& stream, std::int64_t n_steps, const StepObserver& observer) {
  if (n_steps < 0) throw std::invalid_argument("run: negative step count");
  SchemeState state{f0, 0, stream.step()};
  if (observer) observer(state);
  if (n_steps == 0) return state;

  Stepper stepper(scheme, E, noise, state.tau);
  const bool stochastic = scheme != Scheme::deterministic;
  if (stochastic && stream.components != stepper.components())
    throw std::invalid_argument("run: stream component count differs from noise K");
  std::vector<double> dbeta(stochastic ? static_cast<std::size_t>(stream.components) : 0);
  for (std::int64_t n = 0; n < n_steps; ++n) {
    if (stochastic) draw_increments(stream, n, dbeta);
    stepper.advance(state.field, dbeta);
    state.step = n + 1;
    if (observer) observer(state);
  }
  return state;
}

}  // namespace svlasov
