#include "svlasov/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

#include "svlasov/interp.hpp"
#include "svlasov/schemes.hpp"

namespace svlasov {

ObservableRow observe(const Field& f, double t, const std::vector<double>& extra_p) {
  ObservableRow row;
  row.t = t;
  row.l1 = lp_norm(f, 1.0);
  row.l2sq = l2_squared(f);
  row.l2 = std::sqrt(row.l2sq);
  row.linf = lp_norm(f, kInfNorm);
  row.mass = mass(f);
  row.min = min_value(f);
  row.lp_extra.reserve(extra_p.size());
  for (double p : extra_p) row.lp_extra.push_back(lp_norm(f, p));
  return row;
}

double theory_value(const TheoryCurve& curve, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("theory_value: t must be >= 0");
  switch (curve.kind) {
    case CurveKind::trace_linear: return curve.initial + t * curve.rate;
    case CurveKind::l2_exp_ito: return std::exp(curve.rate * t) * curve.initial;
    case CurveKind::l2_exp_strato: return std::exp(2.0 * curve.rate * t) * curve.initial;
    case CurveKind::mass_constant:
    case CurveKind::norm_constant: return curve.initial;
  }
  return curve.initial;
}

double sigma_l2sq_total(const NoiseSpec& spec) {
  double total = 0.0;
  for (const auto& s : spec.sigma) total += l2_squared(s);
  return total;
}

namespace {

double periodic_linear(const FieldOnX& row, double x) {
  const auto n = static_cast<long>(row.size());
  const double p = (x - std::floor(x)) * static_cast<double>(n);
  const double base = std::floor(p);
  const double w = p - base;
  long i0 = static_cast<long>(base) % n;
  const long i1 = (i0 + 1) % n;
  return (1.0 - w) * row[static_cast<std::size_t>(i0)] + w * row[static_cast<std::size_t>(i1)];
}

}  // namespace

std::vector<OracleSample> characteristic_oracle_transport(const Field& f0, const FieldOnX& E, const NoiseSpec& spec,
                                                          const IncrementStream& stream, std::int64_t n_steps,
                                                          const std::vector<Probe>& probes) {
  if (spec.kind != NoiseKind::transport) throw std::invalid_argument("characteristic oracle needs transport noise");
  const auto& g = f0.grid();
  for (const auto& p : probes)
    if (!std::isfinite(p.x) || !std::isfinite(p.v) || std::abs(p.v) > g.vmax)
      throw std::domain_error("characteristic oracle: probe outside the phase domain");

  const Field final_field = run(Scheme::transport, f0, E, &spec, stream, n_steps).field;
  const double tau = stream.step();
  const int K = spec.components();

  std::vector<OracleSample> out;
  out.reserve(probes.size());
  std::vector<double> dbeta(static_cast<std::size_t>(K));
  for (const auto& p : probes) {
    double x = p.x;
    double v = p.v;
    for (std::int64_t n = 0; n < n_steps; ++n) {
      draw_increments(stream, n, dbeta);
      x += tau * v;
      x -= std::floor(x);
      v += tau * periodic_linear(E, x);
      for (int k = 0; k < K; ++k) v += dbeta[k] * periodic_linear(spec.sigma_x[k], x);
    }
    out.push_back({sample_xv(f0, p.x, p.v), sample_xv(final_field, x, v)});
  }
  return out;
}

}  // namespace svlasov
