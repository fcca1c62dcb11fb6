// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//   svlasov_acceptance [--filter SUBSTRING] [--threads N]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "svlasov/commands.hpp"
#include "svlasov/diagnostics.hpp"
#include "svlasov/montecarlo.hpp"

using namespace svlasov;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::uint64_t kSeed = 20240611;

int g_threads = 0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, format, value);
  return buffer;
}

// Largest |mean - theory| / stderr over all steps after t = 0.
double worst_z(const ObservableSeries& s, const std::vector<double>& t, const std::function<double(double)>& theory) {
  double worst = 0.0;
  for (std::size_t n = 1; n < t.size(); ++n) worst = std::max(worst, std::abs(s.mean[n] - theory(t[n])) / s.std_error[n]);
  return worst;
}

Outcome trace_formula() {
  const auto grid = build_grid(200, 401, kTwoPi);
  const auto setup = make_setup(Scheme::additive, "half_sin_v3", grid, 0.1, 10, kSeed);
  const Observable obs[] = {Observable::l2sq};
  const auto stats = run_ensemble(setup, 10000, obs, g_threads);
  const TheoryCurve curve{CurveKind::trace_linear, l2_squared(setup.f0), sigma_l2sq_total(*setup.noise)};
  const double z = worst_z(stats.get(Observable::l2sq), stats.t, [&](double t) { return theory_value(curve, t); });
  return {z <= 4.0, "max |z| = " + fmt("%.3f", z) + " (limit 4)"};
}

Outcome temporal_factorization() {
  const auto grid = build_grid(200, 401, kTwoPi);
  double worst = 0.0;
  for (Scheme scheme : {Scheme::mult_ito, Scheme::mult_strato}) {
    const auto setup = make_setup(scheme, "const(1)", grid, 0.1, 20, kSeed);
    for (std::uint64_t path = 0; path < 10; ++path) {
      const auto stream = setup.stream(path);
      std::vector<Field> det;
      run(Scheme::deterministic, setup.f0, setup.E, nullptr, stream, 20,
          [&](const SchemeState& s) { det.push_back(s.field); });
      run(scheme, setup.f0, setup.E, setup.noise_ptr(), stream, 20, [&](const SchemeState& s) {
        const double beta = path_value(stream, s.step)[0];
        const double t = s.time();
        const double factor = scheme == Scheme::mult_ito ? std::exp(beta - t / 2.0) : std::exp(beta);
        const Field& d = det[static_cast<std::size_t>(s.step)];
        const double scale = lp_norm(d, kInfNorm) * factor;
        for (std::size_t k = 0; k < d.values().size(); ++k)
          worst = std::max(worst, std::abs(s.field.values()[k] - factor * d.values()[k]) / scale);
      });
    }
  }
  return {worst <= 1e-12, "max relative error = " + fmt("%.3e", worst) + " (limit 1e-12)"};
}

struct LawRuns {
  EnsembleStats ito;
  EnsembleStats strato;
  double l2_initial = 0.0;
  double mass_initial = 0.0;
  double sigma2 = 0.0;
};

const LawRuns& law_runs() {
  static const LawRuns runs = [] {
    LawRuns r;
    const auto grid = build_grid(200, 401, kTwoPi);
    const Observable obs[] = {Observable::l2sq, Observable::mass};
    const auto ito = make_setup(Scheme::mult_ito, "cos_sin_pair", grid, 0.1, 10, kSeed + 1);
    const auto strato = make_setup(Scheme::mult_strato, "cos_sin_pair", grid, 0.1, 10, kSeed + 2);
    r.ito = run_ensemble(ito, 10000, obs, g_threads);
    r.strato = run_ensemble(strato, 10000, obs, g_threads);
    r.l2_initial = l2_squared(ito.f0);
    r.mass_initial = mass(ito.f0);
    r.sigma2 = check_sigma_constant(*ito.noise, 1e-12).value_or(std::numeric_limits<double>::quiet_NaN());
    return r;
  }();
  return runs;
}

Outcome l2_law_ito() {
  const auto& r = law_runs();
  const TheoryCurve curve{CurveKind::l2_exp_ito, r.l2_initial, r.sigma2};
  const double z = worst_z(r.ito.get(Observable::l2sq), r.ito.t, [&](double t) { return theory_value(curve, t); });
  return {z <= 4.0, "sigma^2 = " + fmt("%.15g", r.sigma2) + ", max |z| = " + fmt("%.3f", z) + " (limit 4)"};
}

Outcome l2_law_strato() {
  const auto& r = law_runs();
  const TheoryCurve curve{CurveKind::l2_exp_strato, r.l2_initial, r.sigma2};
  const double z = worst_z(r.strato.get(Observable::l2sq), r.strato.t, [&](double t) { return theory_value(curve, t); });
  return {z <= 4.0, "max |z| = " + fmt("%.3f", z) + " (limit 4)"};
}

Outcome expected_mass_ito() {
  const auto& r = law_runs();
  const double z = worst_z(r.ito.get(Observable::mass), r.ito.t, [&](double) { return r.mass_initial; });
  return {z <= 4.0, "max |z| = " + fmt("%.3f", z) + " (limit 4)"};
}

Outcome positivity() {
  const auto grid = build_grid(200, 401, kTwoPi);
  const std::pair<Scheme, const char*> cases[] = {{Scheme::mult_ito, "sin_v3"},
                                                  {Scheme::mult_ito, "cos_sin_pair"},
                                                  {Scheme::mult_strato, "sin_v3"},
                                                  {Scheme::mult_strato, "cos_sin_pair"},
                                                  {Scheme::transport, "const(0.5)"}};
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& [scheme, noise] : cases) {
    const auto setup = make_setup(scheme, noise, grid, 0.1, 100, kSeed);
    run(setup.scheme, setup.f0, setup.E, setup.noise_ptr(), setup.stream(0), 100,
        [&](const SchemeState& s) { lowest = std::min(lowest, min_value(s.field)); });
  }
  return {lowest >= 0.0, "min over 100 steps = " + fmt("%.3e", lowest)};
}

Outcome transport_norms_exact() {
  std::ostringstream report;
  auto config = parse_config("nx = 16\nnv = 33\ntau = 0.1\nT = 0.3\n");
  config.seed = kSeed;
  cmd_validate(config, report);
  std::istringstream lines(report.str());
  for (std::string line; std::getline(lines, line);)
    if (line.find("integer_shift_exactness") != std::string::npos)
      return {line.rfind("PASS", 0) == 0, line.substr(line.find("  ") + 2)};
  return {false, "check missing"};
}

Outcome transport_norms_generic() {
  const auto grid = build_grid(3000, 3001, kTwoPi);
  const auto setup = make_setup(Scheme::transport, "const(0.5)", grid, 0.1, 10, kSeed);
  const std::vector<double> ps = {1.0, 3.0, 55.0};
  const auto initial = observe(setup.f0, 0.0, ps).lp_extra;
  double worst = 0.0;
  for (std::uint64_t r = 0; r < 3; ++r) {
    run(setup.scheme, setup.f0, setup.E, setup.noise_ptr(), setup.stream(r), 10, [&](const SchemeState& s) {
      for (std::size_t q = 0; q < ps.size(); ++q)
        worst = std::max(worst, std::abs(lp_norm(s.field, ps[q]) / initial[q] - 1.0));
    });
  }
  return {worst <= 0.02, "max relative drift of L1/L3/L55 = " + fmt("%.3e", worst) + " (limit 0.02)"};
}

Outcome ms_slope(Scheme scheme, const char* noise, double lo, double hi) {
  const auto grid = build_grid(100, 201, kTwoPi);
  const auto setup = make_setup(scheme, noise, grid, 0.1, 0, kSeed);
  std::vector<double> taus;
  for (int e = 6; e <= 10; ++e) taus.push_back(std::ldexp(1.0, -e));
  const auto table = ms_convergence(setup, 0.5, taus, std::ldexp(1.0, -12), 100, g_threads);
  std::string detail = "slope = " + fmt("%.3f", table.slope) + " (band [" + fmt("%g", lo) + ", " +
                       (std::isinf(hi) ? std::string("inf") : fmt("%g", hi)) + "]); errors";
  for (const auto& row : table.rows) detail += " " + fmt("%.3e", row.rms_error);
  return {table.slope >= lo && table.slope <= hi, detail};
}

Outcome oracle_self_convergence() {
  auto residual = [](int nx, int nv) {
    const auto grid = build_grid(nx, nv, kTwoPi);
    const Field f0 = sample_function(grid, two_stream_f0);
    const FieldOnX E = sample_on_x(grid, cosine_field);
    const auto spec = builtin_sigma("const(0.5)", grid, NoiseKind::transport);
    // Probes at nodes shared by both grids: x = k / 10, v = -0.9 pi + 0.2 pi q.
    std::vector<Probe> probes;
    for (int k = 0; k < 10; ++k)
      for (int q = 0; q < 10; ++q) probes.push_back({k / 10.0, -2.0 * std::numbers::pi + (110 + 20 * q) * std::numbers::pi / 100});
    double worst = 0.0;
    for (const auto& s : characteristic_oracle_transport(f0, E, spec, IncrementStream{kSeed, 0, 1, 0.1, 0}, 10, probes))
      worst = std::max(worst, std::abs(s.observed - s.predicted));
    return worst;
  };
  const double coarse = residual(200, 401);
  const double fine = residual(400, 801);
  return {fine <= 0.6 * coarse,
          "residual 200x401 = " + fmt("%.3e", coarse) + ", 400x801 = " + fmt("%.3e", fine) + ", ratio = " +
              fmt("%.3f", fine / coarse) + " (limit 0.6)"};
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "svlasov_acceptance_determinism";
  fs::remove_all(root);
  auto config = parse_config("scheme = mult_ito\nnoise = cos_sin_pair\nnx = 50\nnv = 101\ntau = 0.1\nT = 1\nsamples = 64\n");
  config.seed = kSeed;
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  std::string outputs[2];
  const int workers[] = {1, 8};
  for (int q = 0; q < 2; ++q) {
    config.threads = workers[q];
    config.out = (root / std::to_string(workers[q])).string();
    outputs[q] = slurp(cmd_laws(config));
  }
  fs::remove_all(root);
  const bool same = !outputs[0].empty() && outputs[0] == outputs[1];
  return {same, same ? "laws.csv identical at 1 and 8 workers (" + std::to_string(outputs[0].size()) + " bytes)"
                     : "laws.csv differs between 1 and 8 workers"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string filter;
  app.add_option("--filter", filter, "run only criteria whose name contains this text");
  app.add_option("--threads", g_threads, "worker threads (default: machine parallelism)");
  CLI11_PARSE(app, argc, argv);

  const double inf = std::numeric_limits<double>::infinity();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"trace_formula", trace_formula},
      {"temporal_factorization", temporal_factorization},
      {"l2_law_ito_K2", l2_law_ito},
      {"l2_law_strato_K2", l2_law_strato},
      {"expected_mass_ito", expected_mass_ito},
      {"positivity", positivity},
      {"transport_norms_exact", transport_norms_exact},
      {"transport_norms_generic", transport_norms_generic},
      {"ms_slope_additive_half_sin_v3", [] { return ms_slope(Scheme::additive, "half_sin_v3", 0.8, 1.2); }},
      {"ms_slope_mult_ito_sin_v3", [] { return ms_slope(Scheme::mult_ito, "sin_v3", 0.8, 1.2); }},
      {"ms_slope_mult_ito_cos_sin_pair", [] { return ms_slope(Scheme::mult_ito, "cos_sin_pair", 0.8, 1.2); }},
      {"ms_slope_mult_strato_sin_v3", [] { return ms_slope(Scheme::mult_strato, "sin_v3", 0.8, 1.2); }},
      {"ms_slope_mult_strato_cos_sin_pair", [] { return ms_slope(Scheme::mult_strato, "cos_sin_pair", 0.8, 1.2); }},
      {"ms_slope_transport_const", [&] { return ms_slope(Scheme::transport, "const(0.5)", 0.4, inf); }},
      {"oracle_self_convergence", oracle_self_convergence},
      {"determinism", determinism},
  };

  int failures = 0;
  int ran = 0;
  for (const auto& [name, body] : criteria) {
    if (!filter.empty() && name.find(filter) == std::string::npos) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = body();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %-36s %s [%.1fs]\n", outcome.pass ? "PASS" : "FAIL", name.c_str(), outcome.detail.c_str(), seconds);
    std::fflush(stdout);
    failures += outcome.pass ? 0 : 1;
  }
  std::printf("%d of %d criteria passed\n", ran - failures, ran);
  return failures == 0 ? 0 : 1;
}
