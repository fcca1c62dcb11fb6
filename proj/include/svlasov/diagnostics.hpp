#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "svlasov/grid.hpp"
#include "svlasov/noise.hpp"
#include "svlasov/operators.hpp"

namespace svlasov {

struct ObservableRow {
  double t = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
  std::vector<double> lp_extra;
  double mass = 0.0;
  double min = 0.0;
  double l2sq = 0.0;
};

ObservableRow observe(const Field& f, double t, const std::vector<double>& extra_p = {});

enum class CurveKind { trace_linear, mass_constant, l2_exp_ito, l2_exp_strato, norm_constant };

/// Closed-form expectation curves. `initial` is ||f0||_2^2 for the L2 laws
/// and the preserved constant for mass_constant / norm_constant; `rate` is
/// sum_k ||sigma_k||_2^2 for trace_linear and sigma^2 for the exponential laws.
struct TheoryCurve {
  CurveKind kind = CurveKind::norm_constant;
  double initial = 0.0;
  double rate = 0.0;
};

double theory_value(const TheoryCurve& curve, double t);

/// sum_k ||sigma_k||_2^2 by grid quadrature.
double sigma_l2sq_total(const NoiseSpec& spec);

struct Probe {
  double x = 0.0;
  double v = 0.0;
};

struct OracleSample {
  double predicted = 0.0;  // f0 at the probe
  double observed = 0.0;   // numerical field at the advanced characteristic point
};

/// Runs the transport scheme for n_steps on the stream's path and, for every
/// probe (x0, v0), follows the discrete characteristic of each split step
/// (x += tau v; v += tau E(x); v += sum_k dbeta_k sigma_k(x)) with the same
/// increments. Both f0 and the final field are read by bilinear interpolation.
/// E and sigma are evaluated at arbitrary x by periodic linear interpolation.
std::vector<OracleSample> characteristic_oracle_transport(const Field& f0, const FieldOnX& E, const NoiseSpec& spec,
                                                          const IncrementStream& stream, std::int64_t n_steps,
                                                          const std::vector<Probe>& probes);

}  // namespace svlasov
