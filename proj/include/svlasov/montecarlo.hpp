#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "svlasov/grid.hpp"
#include "svlasov/noise.hpp"
#include "svlasov/operators.hpp"
#include "svlasov/schemes.hpp"

namespace svlasov {

/// Two-stream initial value exp(-v^2/2)/sqrt(2 pi) (1 + 0.05 cos(2 pi x)) v^2.
double two_stream_f0(double x, double v);

/// Force field E(x) = cos(2 pi x).
double cosine_field(double x);

/// Everything that defines a trajectory apart from its sample index.
struct ExperimentSetup {
  Scheme scheme = Scheme::deterministic;
  Field f0;
  FieldOnX E;
  std::optional<NoiseSpec> noise;
  double tau = 0.1;
  std::int64_t n_steps = 0;
  std::uint64_t master_seed = 0;

  const NoiseSpec* noise_ptr() const { return noise ? &*noise : nullptr; }
  int components() const { return noise ? noise->components() : 1; }
  IncrementStream stream(std::uint64_t sample_index) const {
    return {master_seed, sample_index, components(), tau, 0};
  }
};

/// Two-stream f0 and E = cos(2 pi x) on the grid, with the catalog noise
/// `noise_name` (ignored for the deterministic scheme).
ExperimentSetup make_setup(Scheme scheme, std::string_view noise_name, const PhaseGrid& grid, double tau,
                           std::int64_t n_steps, std::uint64_t master_seed);

enum class Observable { l2sq, mass, l1, linf, min };

std::string_view to_string(Observable o);

struct ObservableSeries {
  Observable which = Observable::l2sq;
  std::vector<double> mean;
  std::vector<double> variance;  // NaN when fewer than two samples
  std::vector<double> std_error;
};

struct EnsembleStats {
  std::vector<double> t;
  std::int64_t count = 0;
  std::vector<ObservableSeries> series;

  const ObservableSeries& get(Observable which) const;
};

double evaluate(Observable o, const Field& f);

/// M independent trajectories (sample indices 0..M-1). Per-sample values are
/// reduced in sample order, so the result does not depend on `threads`.
EnsembleStats run_ensemble(const ExperimentSetup& setup, std::int64_t M, std::span<const Observable> observables,
                           int threads = 0);

struct MsRow {
  double tau = 0.0;
  double rms_error = 0.0;
};

struct MsConvergenceTable {
  std::vector<MsRow> rows;  // tau strictly decreasing
  double slope = 0.0;       // least squares fit of log error against log tau
};

/// Coupled mean-square error study at final time T. For each sample one
/// level-0 stream with step tau_ref drives the reference run and, coarsened,
/// every run in tau_set. The error is sqrt(max over grid nodes of the sample
/// mean of |f_tau - f_ref|^2). setup.tau and setup.n_steps are not used.
MsConvergenceTable ms_convergence(const ExperimentSetup& setup, double T, std::vector<double> tau_set, double tau_ref,
                                  std::int64_t M, int threads = 0);

/// Ordinary least squares slope of log(y) against log(x) over points with y > 0.
/// NaN when fewer than two such points exist.
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// Number of steps of size tau reaching T; throws unless T is an integer
/// multiple of tau to within 1e-9 (relative to the step count).
std::int64_t step_count(double T, double tau);

/// Worker count to use for a requested value (0 = machine parallelism).
int resolve_threads(int requested);

}  // namespace svlasov
