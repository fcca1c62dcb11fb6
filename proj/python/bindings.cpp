#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "svlasov/commands.hpp"
#include "svlasov/config.hpp"
#include "svlasov/diagnostics.hpp"
#include "svlasov/grid.hpp"
#include "svlasov/montecarlo.hpp"
#include "svlasov/noise.hpp"
#include "svlasov/operators.hpp"
#include "svlasov/schemes.hpp"

namespace py = pybind11;
using namespace svlasov;

using Array2 = py::array_t<double, py::array::c_style | py::array::forcecast>;
using Array1 = py::array_t<double, py::array::c_style | py::array::forcecast>;

namespace {

py::array_t<double> to_numpy(const Field& f) {
  const auto& g = f.grid();
  py::array_t<double> out({g.nx, g.nv});
  std::copy(f.values().begin(), f.values().end(), out.mutable_data());
  return out;
}

Field from_numpy(const PhaseGrid& g, const Array2& a) {
  if (a.ndim() != 2 || a.shape(0) != g.nx || a.shape(1) != g.nv)
    throw std::invalid_argument("field array must have shape (nx, nv)");
  return Field(g, std::vector<double>(a.data(), a.data() + a.size()));
}

FieldOnX x_from_numpy(const PhaseGrid& g, const Array1& a) {
  if (a.ndim() != 1 || a.shape(0) != g.nx) throw std::invalid_argument("x-function array must have shape (nx,)");
  return FieldOnX(std::vector<double>(a.data(), a.data() + a.size()));
}

Scheme scheme_of(const std::string& name) {
  auto s = parse_scheme(name);
  if (!s) throw std::invalid_argument("unknown scheme '" + name + "'");
  return *s;
}

NoiseKind kind_of(const std::string& name) {
  for (NoiseKind k : {NoiseKind::additive, NoiseKind::mult_ito, NoiseKind::mult_strato, NoiseKind::transport})
    if (name == to_string(k)) return k;
  throw std::invalid_argument("unknown noise kind '" + name + "'");
}

py::dict stats_to_dict(const EnsembleStats& stats) {
  py::dict d;
  d["t"] = stats.t;
  d["count"] = stats.count;
  for (const auto& s : stats.series) {
    const std::string name(to_string(s.which));
    d[("mean_" + name).c_str()] = s.mean;
    d[("variance_" + name).c_str()] = s.variance;
    d[("stderr_" + name).c_str()] = s.std_error;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_svlasov, m) {
  m.doc() = "Splitting integrators for the stochastic linear Vlasov equation";

  py::class_<PhaseGrid>(m, "PhaseGrid")
      .def_readonly("nx", &PhaseGrid::nx)
      .def_readonly("nv", &PhaseGrid::nv)
      .def_readonly("vmax", &PhaseGrid::vmax)
      .def_readonly("dx", &PhaseGrid::dx)
      .def_readonly("dv", &PhaseGrid::dv)
      .def("x_nodes", [](const PhaseGrid& g) {
        std::vector<double> x(g.nx);
        for (int i = 0; i < g.nx; ++i) x[i] = g.x(i);
        return x;
      })
      .def("v_nodes", [](const PhaseGrid& g) {
        std::vector<double> v(g.nv);
        for (int j = 0; j < g.nv; ++j) v[j] = g.v(j);
        return v;
      })
      .def("__repr__", [](const PhaseGrid& g) {
        std::ostringstream s;
        s << "PhaseGrid(nx=" << g.nx << ", nv=" << g.nv << ", vmax=" << g.vmax << ")";
        return s.str();
      });

  m.def("build_grid", &build_grid, py::arg("nx"), py::arg("nv"), py::arg("vmax") = 2.0 * 3.141592653589793);

  m.def("two_stream", [](const PhaseGrid& g) { return to_numpy(sample_function(g, two_stream_f0)); },
        "Two-stream initial value sampled on the grid.");
  m.def("cosine_field", [](const PhaseGrid& g) { return sample_on_x(g, cosine_field).values; });

  m.def("lp_norm", [](const PhaseGrid& g, const Array2& f, double p) { return lp_norm(from_numpy(g, f), p); },
        py::arg("grid"), py::arg("f"), py::arg("p"));
  m.def("mass", [](const PhaseGrid& g, const Array2& f) { return mass(from_numpy(g, f)); });
  m.def("min_value", [](const PhaseGrid& g, const Array2& f) { return min_value(from_numpy(g, f)); });

  m.def("apply_S1", [](const PhaseGrid& g, const Array2& f, double t) { return to_numpy(apply_S1(from_numpy(g, f), t)); });
  m.def("apply_S2", [](const PhaseGrid& g, const Array2& f, double t, const Array1& E) {
    return to_numpy(apply_S2(from_numpy(g, f), t, x_from_numpy(g, E)));
  });
  m.def("apply_det_step", [](const PhaseGrid& g, const Array2& f, double tau, const Array1& E) {
    return to_numpy(apply_det_step(from_numpy(g, f), tau, x_from_numpy(g, E)));
  });
  m.def("apply_vshift", [](const PhaseGrid& g, const Array2& f, const Array1& shift) {
    return to_numpy(apply_vshift(from_numpy(g, f), x_from_numpy(g, shift)));
  });

  m.def("noise_coefficients", [](const std::string& name, const PhaseGrid& g, const std::string& kind) {
    const NoiseSpec spec = builtin_sigma(name, g, kind_of(kind));
    py::list out;
    if (spec.kind == NoiseKind::transport) {
      for (const auto& s : spec.sigma_x) out.append(py::cast(s.values));
    } else {
      for (const auto& s : spec.sigma) out.append(to_numpy(s));
    }
    return out;
  }, py::arg("name"), py::arg("grid"), py::arg("kind") = "additive");

  m.def("check_sigma_constant", [](const std::string& name, const PhaseGrid& g, const std::string& kind, double tol) {
    return check_sigma_constant(builtin_sigma(name, g, kind_of(kind)), tol);
  }, py::arg("name"), py::arg("grid"), py::arg("kind") = "additive", py::arg("tol") = 1e-12);

  m.def("draw_increments", [](std::uint64_t seed, std::uint64_t sample, int components, double tau, int level,
                              std::int64_t n) {
    return draw_increments(IncrementStream{seed, sample, components, tau, level}, n);
  }, py::arg("seed"), py::arg("sample"), py::arg("components"), py::arg("tau"), py::arg("level"), py::arg("n"));

  m.def("step", [](const std::string& scheme, const std::string& noise, const PhaseGrid& g, const Array2& f,
                   double tau, std::vector<double> dbeta) {
    const Scheme s = scheme_of(scheme);
    ExperimentSetup setup = make_setup(s, noise, g, tau, 1, 0);
    Field field = from_numpy(g, f);
    Stepper(s, setup.E, setup.noise_ptr(), tau).advance(field, dbeta);
    return to_numpy(field);
  }, py::arg("scheme"), py::arg("noise"), py::arg("grid"), py::arg("f"), py::arg("tau"), py::arg("dbeta"),
        "One step from f with E = cos(2 pi x) and the given increments.");

  m.def("run", [](const std::string& scheme, const std::string& noise, const PhaseGrid& g, double tau,
                  std::int64_t n_steps, std::uint64_t seed, std::uint64_t sample) {
    const ExperimentSetup s = make_setup(scheme_of(scheme), noise, g, tau, n_steps, seed);
    py::gil_scoped_release release;
    Field out = run(s.scheme, s.f0, s.E, s.noise_ptr(), s.stream(sample), n_steps).field;
    py::gil_scoped_acquire acquire;
    return to_numpy(out);
  }, py::arg("scheme"), py::arg("noise"), py::arg("grid"), py::arg("tau"), py::arg("n_steps"), py::arg("seed") = 0,
        py::arg("sample") = 0, "Final field of one trajectory from the two-stream initial value.");

  m.def("run_ensemble", [](const std::string& scheme, const std::string& noise, const PhaseGrid& g, double tau,
                           double T, std::int64_t samples, std::uint64_t seed, int threads) {
    const ExperimentSetup s = make_setup(scheme_of(scheme), noise, g, tau, step_count(T, tau), seed);
    const Observable obs[] = {Observable::l2sq, Observable::mass};
    EnsembleStats stats;
    {
      py::gil_scoped_release release;
      stats = run_ensemble(s, samples, obs, threads);
    }
    return stats_to_dict(stats);
  }, py::arg("scheme"), py::arg("noise"), py::arg("grid"), py::arg("tau"), py::arg("T"), py::arg("samples"),
        py::arg("seed") = 0, py::arg("threads") = 0);

  m.def("ms_convergence", [](const std::string& scheme, const std::string& noise, const PhaseGrid& g, double T,
                             std::vector<double> tau_set, double tau_ref, std::int64_t samples, std::uint64_t seed,
                             int threads) {
    const ExperimentSetup s = make_setup(scheme_of(scheme), noise, g, tau_ref, 0, seed);
    MsConvergenceTable table;
    {
      py::gil_scoped_release release;
      table = ms_convergence(s, T, tau_set, tau_ref, samples, threads);
    }
    py::dict d;
    std::vector<double> taus, errors;
    for (const auto& r : table.rows) {
      taus.push_back(r.tau);
      errors.push_back(r.rms_error);
    }
    d["tau"] = taus;
    d["rms_error"] = errors;
    d["slope"] = table.slope;
    return d;
  }, py::arg("scheme"), py::arg("noise"), py::arg("grid"), py::arg("T"), py::arg("tau_set"), py::arg("tau_ref"),
        py::arg("samples"), py::arg("seed") = 0, py::arg("threads") = 0);

  m.def("parse_config", [](const std::string& text) {
    const ExperimentConfig c = parse_config(text);
    py::dict d;
    d["scheme"] = std::string(to_string(c.scheme));
    d["noise"] = c.noise;
    d["nx"] = c.nx;
    d["nv"] = c.nv;
    d["vmax"] = c.vmax;
    d["tau"] = c.tau;
    d["T"] = c.T;
    d["n_steps"] = c.n_steps();
    d["samples"] = c.samples;
    d["seed"] = c.seed;
    d["snapshot_times"] = c.snapshot_times;
    d["extra_p"] = c.extra_p;
    d["tau_ref"] = c.tau_ref;
    d["tau_set"] = c.tau_set;
    d["out"] = c.out;
    return d;
  });

  m.def("validate", [](const std::string& text) {
    std::ostringstream report;
    const bool ok = cmd_validate(parse_config(text), report);
    return py::make_tuple(ok, report.str());
  });

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
}
