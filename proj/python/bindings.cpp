#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "perpetua/analysis.hpp"
#include "perpetua/harness.hpp"
#include "perpetua/io.hpp"
#include "perpetua/sampler.hpp"

namespace py = pybind11;
using namespace perpetua;

// Structured values cross the boundary as JSON text; the Python package wraps
// them in dicts.
namespace {

LevyTriplet triplet_of(const std::string& text) { return triplet_from_json(json::parse(text)); }
TestFunction function_of(const std::string& text) { return test_function_from_json(json::parse(text)); }

}  // namespace

PYBIND11_MODULE(_perpetua, m) {
  m.doc() = "Perpetual integrals of Levy processes";

  static py::exception<Error> error(m, "PerpetuaError", PyExc_RuntimeError);
  static py::exception<ConfigError> config_error(m, "ConfigError", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      config_error(e.what());
    } catch (const Error& e) {
      error(e.what());
    } catch (const json::exception& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def("char_exponent", [](const std::string& triplet, const std::vector<double>& lambdas) {
    const auto t = triplet_of(triplet);
    std::vector<std::complex<double>> out;
    for (double l : lambdas) out.push_back(char_exponent(t, l));
    return out;
  });
  m.def("classify", [](const std::string& triplet) { return to_json(classify(triplet_of(triplet))).dump(); });
  m.def("local_time_criterion",
        [](const std::string& triplet) { return to_json(local_time_criterion(triplet_of(triplet))).dump(); });
  m.def("tail_integral_test",
        [](const std::string& f) { return to_json(tail_integral_test(function_of(f))).dump(); });
  m.def("verdict", [](const std::string& triplet, const std::string& f) {
    return to_json(perpetual_verdict(triplet_of(triplet), function_of(f))).dump();
  });
  m.def("potential_density", [](const std::string& triplet, const std::vector<double>& grid) {
    const auto pd = potential_density(triplet_of(triplet), grid);
    return std::make_pair(pd.u_values, pd.error_estimates);
  });

  m.def(
      "sample_path",
      [](const std::string& triplet, double horizon, double dt, double x0, std::uint64_t seed) {
        const auto p = [&] {
          py::gil_scoped_release release;
          return sample_path(triplet_of(triplet), horizon, dt, x0, seed);
        }();
        std::vector<std::pair<double, double>> jumps;
        for (const auto& j : p.jumps) jumps.emplace_back(j.time, j.size);
        return py::make_tuple(p.times, p.values, jumps);
      },
      py::arg("triplet"), py::arg("horizon"), py::arg("dt"), py::arg("x0"), py::arg("seed"));
  m.def(
      "perpetual_estimate",
      [](const std::string& triplet, const std::string& f, const std::vector<double>& checkpoints, double dt,
         std::uint64_t seed) {
        py::gil_scoped_release release;
        const auto path = sample_path(triplet_of(triplet), checkpoints.back(), dt, 0.0, seed);
        return perpetual_estimate(path, function_of(f), checkpoints);
      },
      py::arg("triplet"), py::arg("f"), py::arg("checkpoints"), py::arg("dt"), py::arg("seed"));
  m.def(
      "overshoot_ensemble",
      [](const std::string& triplet, double z, std::size_t n, std::uint64_t seed, double dt, unsigned threads,
         double cap) {
        py::gil_scoped_release release;
        return overshoot_ensemble(triplet_of(triplet), z, n, seed, {dt, threads, cap}).samples();
      },
      py::arg("triplet"), py::arg("z"), py::arg("n"), py::arg("seed"), py::arg("dt") = 0.01, py::arg("threads") = 1,
      py::arg("cap") = 0.0);
  m.def("ks_statistic", [](std::vector<double> a, std::vector<double> b) {
    return ks_statistic(EmpiricalDistribution(std::move(a)), EmpiricalDistribution(std::move(b)));
  });
  m.def("ks_critical_value", &ks_critical_value);

  m.def("parse_config", [](const std::string& text) { return to_json(parse_config(text)).dump(); });
  m.def(
      "run_experiment",
      [](const std::string& config_text, const std::filesystem::path& out_dir, unsigned threads,
         std::optional<std::uint64_t> seed, std::vector<std::string> checks) {
        const auto config = parse_config(config_text);
        ExperimentResult res;
        {
          py::gil_scoped_release release;
          res = run_experiment(config, out_dir, {threads, seed, std::move(checks)});
        }
        return py::make_tuple(res.ok, res.report_path);
      },
      py::arg("config"), py::arg("out_dir"), py::arg("threads") = 1, py::arg("seed") = py::none(),
      py::arg("checks") = std::vector<std::string>{});
  m.def("check_names", &check_names);
}
