#include "svlasov/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>

#include "svlasov/diagnostics.hpp"

namespace svlasov {

namespace fs = std::filesystem;

std::string format_real(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

namespace {

std::string format_short(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%g", value);
  return buffer;
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

PhaseGrid grid_of(const ExperimentConfig& c) { return build_grid(c.nx, c.nv, c.vmax); }

}  // namespace

void write_field_csv(std::ostream& out, const Field& f) {
  const auto& g = f.grid();
  out << "x,v,f\n";
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.nv; ++j) out << format_real(g.x(i)) << ',' << format_real(g.v(j)) << ',' << format_real(f(i, j)) << '\n';
}

ExperimentSetup setup_from_config(const ExperimentConfig& config) {
  validate_config(config);
  return make_setup(config.scheme, config.noise, grid_of(config), config.tau, config.n_steps(), config.seed);
}

std::vector<fs::path> cmd_snapshot(const ExperimentConfig& config) {
  const ExperimentSetup setup = setup_from_config(config);
  std::vector<double> times = config.snapshot_times;
  if (times.empty()) times.push_back(config.T);

  std::vector<std::int64_t> wanted;
  for (double t : times) wanted.push_back(step_count(t, config.tau));
  const std::int64_t last = *std::max_element(wanted.begin(), wanted.end());

  std::vector<fs::path> written;
  run(setup.scheme, setup.f0, setup.E, setup.noise_ptr(), setup.stream(0), last, [&](const SchemeState& s) {
    for (std::size_t q = 0; q < wanted.size(); ++q) {
      if (wanted[q] != s.step) continue;
      const fs::path path = fs::path(config.out) / ("snapshot_t" + format_short(times[q]) + ".csv");
      auto out = open_output(path);
      write_field_csv(out, s.field);
      written.push_back(path);
    }
  });
  return written;
}

fs::path cmd_laws(const ExperimentConfig& config) {
  const ExperimentSetup setup = setup_from_config(config);
  const Observable observables[] = {Observable::l2sq, Observable::mass};
  const EnsembleStats stats = run_ensemble(setup, config.samples, observables, config.threads);

  TheoryCurve l2_curve{CurveKind::norm_constant, l2_squared(setup.f0), 0.0};
  bool l2_defined = true;
  if (setup.noise) {
    switch (setup.scheme) {
      case Scheme::additive: l2_curve = {CurveKind::trace_linear, l2_curve.initial, sigma_l2sq_total(*setup.noise)}; break;
      case Scheme::mult_ito:
      case Scheme::mult_strato:
        if (auto s2 = check_sigma_constant(*setup.noise, 1e-12)) {
          l2_curve = {setup.scheme == Scheme::mult_ito ? CurveKind::l2_exp_ito : CurveKind::l2_exp_strato, l2_curve.initial, *s2};
        } else {
          l2_defined = false;
        }
        break;
      default: break;
    }
  }
  const TheoryCurve mass_curve{CurveKind::mass_constant, mass(setup.f0), 0.0};

  const fs::path path = fs::path(config.out) / "laws.csv";
  auto out = open_output(path);
  out << "t,mean_l2sq,stderr_l2sq,theory_l2sq,mean_mass,stderr_mass,theory_mass\n";
  const auto& l2 = stats.get(Observable::l2sq);
  const auto& m = stats.get(Observable::mass);
  for (std::size_t n = 0; n < stats.t.size(); ++n) {
    const double t = stats.t[n];
    const double theory_l2 = l2_defined ? theory_value(l2_curve, t) : std::numeric_limits<double>::quiet_NaN();
    out << format_real(t) << ',' << format_real(l2.mean[n]) << ',' << format_real(l2.std_error[n]) << ','
        << format_real(theory_l2) << ',' << format_real(m.mean[n]) << ',' << format_real(m.std_error[n]) << ','
        << format_real(theory_value(mass_curve, t)) << '\n';
  }
  return path;
}

fs::path cmd_norms(const ExperimentConfig& config) {
  const ExperimentSetup setup = setup_from_config(config);
  const std::vector<double> ps = config.extra_p.empty() ? std::vector<double>{3.0, 55.0} : config.extra_p;

  std::vector<std::vector<ObservableRow>> rows(static_cast<std::size_t>(config.samples));
  for (std::int64_t r = 0; r < config.samples; ++r) {
    run(setup.scheme, setup.f0, setup.E, setup.noise_ptr(), setup.stream(static_cast<std::uint64_t>(r)), setup.n_steps,
        [&](const SchemeState& s) { rows[static_cast<std::size_t>(r)].push_back(observe(s.field, s.time(), ps)); });
  }

  const fs::path path = fs::path(config.out) / "norms.csv";
  auto out = open_output(path);
  out << "realization,t,l1";
  for (double p : ps) out << ",l" << format_short(p);
  out << ",min\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (const auto& row : rows[r]) {
      out << r << ',' << format_real(row.t) << ',' << format_real(row.l1);
      for (double v : row.lp_extra) out << ',' << format_real(v);
      out << ',' << format_real(row.min) << '\n';
    }
  }
  return path;
}

fs::path cmd_msconv(const ExperimentConfig& config) {
  if (!(config.tau_ref > 0.0)) throw ConfigError(0, "msconv needs tau_ref");
  if (config.tau_set.empty()) throw ConfigError(0, "msconv needs tau_set");
  const ExperimentSetup setup = setup_from_config(config);
  MsConvergenceTable table;
  try {
    table = ms_convergence(setup, config.T, config.tau_set, config.tau_ref, config.samples, config.threads);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, e.what());
  }
  const fs::path path = fs::path(config.out) / "msconv.csv";
  auto out = open_output(path);
  out << "tau,rms_error\n";
  for (const auto& row : table.rows) out << format_real(row.tau) << ',' << format_real(row.rms_error) << '\n';
  out << "# slope = " << format_real(table.slope) << '\n';
  return path;
}

namespace {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string measured;
};

double max_abs_diff(const Field& a, const Field& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.values().size(); ++k) worst = std::max(worst, std::abs(a.values()[k] - b.values()[k]));
  return worst;
}

double relative_sup_error(const Field& a, const Field& reference) {
  const double scale = lp_norm(reference, kInfNorm);
  return scale > 0.0 ? max_abs_diff(a, reference) / scale : max_abs_diff(a, reference);
}

std::vector<CheckResult> positivity_checks(const PhaseGrid& grid, double tau, std::uint64_t seed) {
  std::vector<CheckResult> out;
  const std::pair<Scheme, const char*> cases[] = {
      {Scheme::mult_ito, "sin_v3"}, {Scheme::mult_strato, "cos_sin_pair"}, {Scheme::transport, "const(0.5)"}};
  for (const auto& [scheme, noise] : cases) {
    const ExperimentSetup s = make_setup(scheme, noise, grid, tau, 20, seed);
    double lowest = std::numeric_limits<double>::infinity();
    run(s.scheme, s.f0, s.E, s.noise_ptr(), s.stream(0), s.n_steps,
        [&](const SchemeState& st) { lowest = std::min(lowest, min_value(st.field)); });
    out.push_back({"positivity/" + std::string(to_string(scheme)), lowest >= 0.0, "min=" + format_real(lowest)});
  }
  return out;
}

std::vector<CheckResult> zero_noise_checks(const PhaseGrid& grid, double tau) {
  std::vector<CheckResult> out;
  const std::pair<Scheme, const char*> cases[] = {{Scheme::additive, "half_sin_v3"},
                                                  {Scheme::mult_ito, "cos_sin_pair"},
                                                  {Scheme::mult_strato, "sin_v3"},
                                                  {Scheme::transport, "const(0.5)"}};
  for (const auto& [scheme, noise] : cases) {
    const ExperimentSetup s = make_setup(scheme, noise, grid, tau, 1, 0);
    const SchemeState start{s.f0, 0, tau};
    const Field det = step_deterministic(start, s.E).field;
    Field expected = det;
    if (scheme == Scheme::mult_ito) {
      std::vector<double> sum_sq(det.values().size(), 0.0);
      for (const auto& sig : s.noise->sigma)
        for (std::size_t k = 0; k < sum_sq.size(); ++k) sum_sq[k] += sig.values()[k] * sig.values()[k];
      for (std::size_t k = 0; k < sum_sq.size(); ++k) expected.values()[k] *= std::exp(-(sum_sq[k] * (0.5 * tau)));
    }
    const std::vector<double> zeros(static_cast<std::size_t>(s.noise->components()), 0.0);
    Field got = s.f0;
    Stepper(scheme, s.E, s.noise_ptr(), tau).advance(got, zeros);
    const double diff = max_abs_diff(got, expected);
    out.push_back({"zero_noise/" + std::string(to_string(scheme)), diff == 0.0, "max_diff=" + format_real(diff)});
  }
  return out;
}

std::vector<CheckResult> temporal_checks(const PhaseGrid& grid, double tau, std::uint64_t seed) {
  std::vector<CheckResult> out;
  const std::int64_t steps = 20;
  for (Scheme scheme : {Scheme::mult_ito, Scheme::mult_strato}) {
    const ExperimentSetup s = make_setup(scheme, "const(1)", grid, tau, steps, seed);
    double worst = 0.0;
    for (std::uint64_t path = 0; path < 3; ++path) {
      const IncrementStream stream = s.stream(path);
      std::vector<Field> det_fields;
      run(Scheme::deterministic, s.f0, s.E, nullptr, stream, steps,
          [&](const SchemeState& st) { det_fields.push_back(st.field); });
      double beta = 0.0;
      run(scheme, s.f0, s.E, s.noise_ptr(), stream, steps, [&](const SchemeState& st) {
        if (st.step > 0) beta += draw_increments(stream, st.step - 1)[0];
        const double t = st.time();
        const double factor = scheme == Scheme::mult_ito ? std::exp(beta - t / 2.0) : std::exp(beta);
        Field scaled = det_fields[static_cast<std::size_t>(st.step)];
        for (double& v : scaled.values()) v *= factor;
        worst = std::max(worst, relative_sup_error(st.field, scaled));
      });
    }
    out.push_back({"temporal_factorization/" + std::string(to_string(scheme)), worst <= 1e-12,
                   "rel_err=" + format_real(worst)});
  }
  return out;
}

CheckResult integer_shift_check(std::uint64_t seed) {
  // dx = 1/8, dv = 1/4 and tau = 1/2: every foot point is a grid node.
  const PhaseGrid g = build_grid(8, 129, 16.0);
  Field f = sample_function(g, [](double x, double v) { return std::abs(v) <= 2.0 ? two_stream_f0(x, v) : 0.0; });
  FieldOnX E(g, 0.0);
  for (int i = 0; i < g.nx; ++i) E[i] = (i % 3) - 1.0;
  NoiseSpec spec = builtin_sigma("const(0.25)", g, NoiseKind::transport);
  Stepper stepper(Scheme::transport, E, &spec, 0.5);
  const double ps[] = {1.0, 3.0, 55.0};
  double initial[3];
  for (int q = 0; q < 3; ++q) initial[q] = lp_norm(f, ps[q]);
  bool exact = true;
  double worst = 0.0;
  for (std::int64_t n = 0; n < 10; ++n) {
    const double sign = keyed_normal(seed, 0, static_cast<std::uint64_t>(n), 0) < 0.0 ? -1.0 : 1.0;
    const double dbeta[] = {sign};
    stepper.advance(f, dbeta);
    for (int q = 0; q < 3; ++q) {
      const double now = lp_norm(f, ps[q]);
      exact = exact && now == initial[q];
      worst = std::max(worst, std::abs(now - initial[q]));
    }
  }
  return {"integer_shift_exactness/transport", exact, "max_norm_change=" + format_real(worst)};
}

std::vector<CheckResult> coupling_checks(std::uint64_t seed) {
  const PhaseGrid g = build_grid(16, 33, 2.0 * 3.141592653589793);
  const double tau_ref = 1.0 / 64.0;
  const ExperimentSetup s = make_setup(Scheme::additive, "half_sin_v3", g, tau_ref, 16, seed);
  const IncrementStream fine = s.stream(3);
  const Field ref = run(s.scheme, s.f0, s.E, s.noise_ptr(), fine, 16).field;
  const Field same = run(s.scheme, s.f0, s.E, s.noise_ptr(), coarsen(fine, 1), 16).field;
  const bool fields_equal = ref == same;
  const auto beta_fine = path_value(fine, 16);
  const auto beta_coarse = path_value(coarsen(fine, 4), 4);
  const bool paths_equal = beta_fine == beta_coarse;
  return {{"coupling/reference_replay", fields_equal, "max_diff=" + format_real(max_abs_diff(ref, same))},
          {"coupling/path_telescoping", paths_equal,
           "beta_fine=" + format_real(beta_fine[0]) + " beta_coarse=" + format_real(beta_coarse[0])}};
}

}  // namespace

bool cmd_validate(const ExperimentConfig& config, std::ostream& report) {
  validate_config(config);
  const PhaseGrid grid = grid_of(config);
  std::vector<CheckResult> results;
  auto append = [&](std::vector<CheckResult> more) { results.insert(results.end(), more.begin(), more.end()); };
  append(positivity_checks(grid, config.tau, config.seed));
  append(zero_noise_checks(grid, config.tau));
  append(temporal_checks(grid, config.tau, config.seed));
  results.push_back(integer_shift_check(config.seed));
  append(coupling_checks(config.seed));

  bool all = true;
  for (const auto& r : results) {
    report << (r.pass ? "PASS " : "FAIL ") << r.name << "  " << r.measured << '\n';
    all = all && r.pass;
  }
  return all;
}

}  // namespace svlasov
