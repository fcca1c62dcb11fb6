#include "svlasov/montecarlo.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace svlasov {

double two_stream_f0(double x, double v) {
  return std::exp(-v * v / 2.0) / std::sqrt(2.0 * std::numbers::pi) * (1.0 + 0.05 * std::cos(2.0 * std::numbers::pi * x)) *
         v * v;
}

double cosine_field(double x) { return std::cos(2.0 * std::numbers::pi * x); }

ExperimentSetup make_setup(Scheme scheme, std::string_view noise_name, const PhaseGrid& grid, double tau,
                           std::int64_t n_steps, std::uint64_t master_seed) {
  ExperimentSetup s;
  s.scheme = scheme;
  s.f0 = sample_function(grid, two_stream_f0);
  s.E = sample_on_x(grid, cosine_field);
  if (auto kind = noise_kind_for(scheme)) s.noise = builtin_sigma(noise_name, grid, *kind);
  s.tau = tau;
  s.n_steps = n_steps;
  s.master_seed = master_seed;
  return s;
}

std::string_view to_string(Observable o) {
  switch (o) {
    case Observable::l2sq: return "l2sq";
    case Observable::mass: return "mass";
    case Observable::l1: return "l1";
    case Observable::linf: return "linf";
    case Observable::min: return "min";
  }
  return "unknown";
}

const ObservableSeries& EnsembleStats::get(Observable which) const {
  for (const auto& s : series)
    if (s.which == which) return s;
  throw std::out_of_range("EnsembleStats: observable " + std::string(to_string(which)) + " was not collected");
}

double evaluate(Observable o, const Field& f) {
  switch (o) {
    case Observable::l2sq: return l2_squared(f);
    case Observable::mass: return mass(f);
    case Observable::l1: return lp_norm(f, 1.0);
    case Observable::linf: return lp_norm(f, kInfNorm);
    case Observable::min: return min_value(f);
  }
  return 0.0;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
#ifdef _OPENMP
  return std::max(1, omp_get_max_threads());
#else
  return 1;
#endif
}

namespace {

// Runs body(index) for index in [0, count) on `threads` workers and rethrows
// the first exception raised by any of them.
template <class Body>
void parallel_for(std::int64_t count, int threads, Body&& body) {
  std::exception_ptr error;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
#endif
  for (std::int64_t index = 0; index < count; ++index) {
    try {
      body(index);
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical(svlasov_parallel_error)
#endif
      if (!error) error = std::current_exception();
    }
  }
  (void)threads;
  if (error) std::rethrow_exception(error);
}

}  // namespace

EnsembleStats run_ensemble(const ExperimentSetup& setup, std::int64_t M, std::span<const Observable> observables,
                           int threads) {
  if (M < 1) throw std::invalid_argument("run_ensemble: need at least one sample");
  const std::size_t n_obs = observables.size();
  const std::size_t n_times = static_cast<std::size_t>(setup.n_steps) + 1;
  const std::size_t stride = n_obs * n_times;
  std::vector<double> samples(static_cast<std::size_t>(M) * stride);

  parallel_for(M, resolve_threads(threads), [&](std::int64_t m) {
    double* out = samples.data() + static_cast<std::size_t>(m) * stride;
    run(setup.scheme, setup.f0, setup.E, setup.noise_ptr(), setup.stream(static_cast<std::uint64_t>(m)), setup.n_steps,
        [&](const SchemeState& s) {
          for (std::size_t o = 0; o < n_obs; ++o) out[static_cast<std::size_t>(s.step) * n_obs + o] = evaluate(observables[o], s.field);
        });
  });

  EnsembleStats stats;
  stats.count = M;
  for (std::size_t n = 0; n < n_times; ++n) stats.t.push_back(static_cast<double>(n) * setup.tau);
  for (std::size_t o = 0; o < n_obs; ++o) {
    ObservableSeries series;
    series.which = observables[o];
    for (std::size_t n = 0; n < n_times; ++n) {
      double sum = 0.0;
      for (std::int64_t m = 0; m < M; ++m) sum += samples[static_cast<std::size_t>(m) * stride + n * n_obs + o];
      const double mean = sum / static_cast<double>(M);
      double var = std::numeric_limits<double>::quiet_NaN();
      if (M >= 2) {
        double sq = 0.0;
        for (std::int64_t m = 0; m < M; ++m) {
          const double d = samples[static_cast<std::size_t>(m) * stride + n * n_obs + o] - mean;
          sq += d * d;
        }
        var = sq / static_cast<double>(M - 1);
      }
      series.mean.push_back(mean);
      series.variance.push_back(var);
      series.std_error.push_back(std::sqrt(var / static_cast<double>(M)));
    }
    stats.series.push_back(std::move(series));
  }
  return stats;
}

std::int64_t step_count(double T, double tau) {
  if (!std::isfinite(T) || !std::isfinite(tau) || tau <= 0.0 || T < 0.0)
    throw std::invalid_argument("step count: need finite T >= 0 and tau > 0");
  const double ratio = T / tau;
  const double n = std::nearbyint(ratio);
  if (std::abs(ratio - n) > 1e-9 * std::max(1.0, n))
    throw std::invalid_argument("step count: T = " + std::to_string(T) + " is not a multiple of tau = " + std::to_string(tau));
  return static_cast<std::int64_t>(n);
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i)
    if (y[i] > 0.0 && x[i] > 0.0) pts.emplace_back(std::log(x[i]), std::log(y[i]));
  if (pts.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0.0, my = 0.0;
  for (const auto& [a, b] : pts) {
    mx += a;
    my += b;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [a, b] : pts) {
    sxy += (a - mx) * (b - my);
    sxx += (a - mx) * (a - mx);
  }
  return sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

MsConvergenceTable ms_convergence(const ExperimentSetup& setup, double T, std::vector<double> tau_set, double tau_ref,
                                  std::int64_t M, int threads) {
  if (M < 1) throw std::invalid_argument("ms_convergence: need at least one sample");
  if (tau_set.empty()) throw std::invalid_argument("ms_convergence: empty step-size set");
  std::sort(tau_set.begin(), tau_set.end(), std::greater<>());
  if (std::adjacent_find(tau_set.begin(), tau_set.end()) != tau_set.end())
    throw std::invalid_argument("ms_convergence: duplicate step sizes");

  const std::int64_t n_ref = step_count(T, tau_ref);
  std::vector<std::int64_t> factors;
  std::vector<std::int64_t> n_coarse;
  for (double tau : tau_set) {
    const double ratio = tau / tau_ref;
    const double r = std::nearbyint(ratio);
    const auto factor = static_cast<std::int64_t>(r);
    if (std::abs(ratio - r) > 1e-9 * r || factor < 1 || (factor & (factor - 1)) != 0)
      throw std::invalid_argument("ms_convergence: tau = " + std::to_string(tau) + " is not a dyadic multiple of tau_ref");
    if (n_ref % factor != 0) throw std::invalid_argument("ms_convergence: T is not a multiple of tau = " + std::to_string(tau));
    factors.push_back(factor);
    n_coarse.push_back(n_ref / factor);
  }

  const std::size_t nodes = setup.f0.values().size();
  const std::size_t n_tau = tau_set.size();
  const int workers = resolve_threads(threads);
  const std::int64_t block = std::max<std::int64_t>(4, 2 * workers);

  ExperimentSetup fine = setup;
  fine.tau = tau_ref;
  std::vector<double> accum(n_tau * nodes, 0.0);
  std::vector<double> local(static_cast<std::size_t>(block) * n_tau * nodes);

  for (std::int64_t first = 0; first < M; first += block) {
    const std::int64_t count = std::min(block, M - first);
    parallel_for(count, workers, [&](std::int64_t b) {
      const auto sample = static_cast<std::uint64_t>(first + b);
      const IncrementStream stream = fine.stream(sample);
      const Field ref = run(setup.scheme, setup.f0, setup.E, setup.noise_ptr(), stream, n_ref).field;
      double* out = local.data() + static_cast<std::size_t>(b) * n_tau * nodes;
      for (std::size_t q = 0; q < n_tau; ++q) {
        const Field coarse =
            run(setup.scheme, setup.f0, setup.E, setup.noise_ptr(), coarsen(stream, factors[q]), n_coarse[q]).field;
        const auto a = coarse.values();
        const auto r = ref.values();
        for (std::size_t k = 0; k < nodes; ++k) {
          const double d = a[k] - r[k];
          out[q * nodes + k] = d * d;
        }
      }
    });
    for (std::int64_t b = 0; b < count; ++b) {
      const double* in = local.data() + static_cast<std::size_t>(b) * n_tau * nodes;
      for (std::size_t k = 0; k < n_tau * nodes; ++k) accum[k] += in[k];
    }
  }

  MsConvergenceTable table;
  std::vector<double> taus, errors;
  for (std::size_t q = 0; q < n_tau; ++q) {
    double worst = 0.0;
    for (std::size_t k = 0; k < nodes; ++k) worst = std::max(worst, accum[q * nodes + k] / static_cast<double>(M));
    table.rows.push_back({tau_set[q], std::sqrt(worst)});
    taus.push_back(tau_set[q]);
    errors.push_back(std::sqrt(worst));
  }
  table.slope = loglog_slope(taus, errors);
  return table;
}

}  // namespace svlasov
