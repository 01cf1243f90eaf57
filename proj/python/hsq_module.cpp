// JSON-in, JSON-out bindings; the Python package decodes with the json module.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hsq/error.hpp"
#include "hsq/experiment.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

hsq::ExperimentConfig parse_config(const std::string& text) {
  const json j = json::parse(text);
  hsq::ExperimentConfig cfg;
  cfg.instance = hsq::instance_spec_from_json(j.at("instance"));
  cfg.trials = j.value("trials", std::size_t{1});
  const std::string backend = j.value("backend", "collapsed");
  cfg.both_backends = backend == "both";
  cfg.run.backend = cfg.both_backends ? hsq::Backend::Collapsed : hsq::backend_from_string(backend);
  cfg.run.policy = hsq::CouplingPolicy::parse(j.value("coupling", "auto"));
  cfg.run.policy.time_factor = j.value("time_factor", 1.0);
  cfg.run.max_repeats = j.value("max_repeats", std::size_t{50});
  cfg.run.max_restarts = j.value("max_restarts", std::size_t{3});
  cfg.run.purify = j.value("purify", false);
  cfg.shots = j.value("shots", std::size_t{64});
  cfg.gip_budget = j.value("gip_budget", std::size_t{40});
  cfg.out_dir = j.value("out_dir", "");
  if (j.contains("division")) {
    cfg.division = j["division"] == "value" ? hsq::DivisionMode::Value : hsq::DivisionMode::Rank;
  }
  return cfg;
}

json path_json(const hsq::PathSpec& path) {
  json steps = json::array();
  for (std::size_t i = 0; i < path.steps.size(); ++i) {
    steps.push_back({{"i", i},
                     {"N_i", path.steps[i].N_marked},
                     {"c_mix", path.steps[i].c_mix},
                     {"E0", path.eigen[i].E0},
                     {"E1", path.eigen[i].E1},
                     {"gap", path.eigen[i].gap},
                     {"d0", path.overlaps[i]},
                     {"degenerate", static_cast<bool>(path.degenerate[i])}});
  }
  return steps;
}

std::string run(const std::string& config) {
  const hsq::ExperimentResult res = hsq::run_experiment(parse_config(config));
  json trials = json::array();
  for (const auto& t : res.trials) {
    json row{{"trace", hsq::to_json(t.run.trace)}, {"verdict", hsq::to_json(t.verdict)}};
    if (t.dense_run) {
      row["dense_trace"] = hsq::to_json(t.dense_run->trace);
      row["backend_trace_diff"] = t.backend_trace_diff;
      row["backend_amplitude_diff"] = t.backend_amplitude_diff;
    }
    trials.push_back(std::move(row));
  }
  json out{{"exit_code", res.exit_code}, {"message", res.message}, {"verified", res.verified}, {"trials", trials}};
  if (res.path) out["path"] = path_json(*res.path);
  return out.dump();
}

std::string path_report(const std::string& instance, const std::string& division) {
  const hsq::Instance inst = hsq::Instance::build(hsq::instance_spec_from_json(json::parse(instance)));
  std::optional<hsq::DivisionMode> mode;
  if (division == "rank") mode = hsq::DivisionMode::Rank;
  if (division == "value") mode = hsq::DivisionMode::Value;
  return path_json(hsq::build_path(hsq::marked_hierarchy(inst.oracle(), inst.division_set(mode)))).dump();
}

std::string sweep(const std::string& base, const std::string& family, std::uint64_t lo, std::uint64_t hi,
                  const std::vector<std::string>& couplings) {
  return hsq::sweep(hsq::sweep_grid(parse_config(base), family, lo, hi, couplings));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multistep resonant-transition simulator for hidden subgroup problems";

  static py::exception<hsq::Error> error(m, "HsqError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const hsq::Error& e) {
      py::set_error(error, e.what());
    } catch (const nlohmann::json::exception& e) {
      py::set_error(PyExc_ValueError, e.what());
    }
  });

  m.def("spectrum", [](std::vector<hsq::Value> values) {
    const auto s = hsq::spectrum(hsq::HidingOracle(std::move(values), hsq::Family::Generic));
    return py::make_tuple(s.distinct_values, s.multiplicities);
  });
  m.def("division_set_rank", [](std::vector<hsq::Value> values) {
    return hsq::division_set_rank(hsq::spectrum(hsq::HidingOracle(std::move(values), hsq::Family::Generic)))
        .thresholds;
  });
  m.def("division_set_value", [](hsq::Value start, hsq::Value floor) {
    return hsq::division_set_value(start, floor).thresholds;
  }, py::arg("start"), py::arg("floor") = 1);
  m.def("marked_counts", [](std::vector<hsq::Value> values, std::vector<hsq::Value> thresholds) {
    return hsq::marked_hierarchy(hsq::HidingOracle(std::move(values), hsq::Family::Generic),
                                 hsq::DivisionSet{std::move(thresholds), hsq::DivisionMode::Rank})
        .counts;
  });
  m.def("rabi_probability", &hsq::rabi_probability, py::arg("c"), py::arg("t"), py::arg("d0"));
  m.def("path_report", &path_report, py::arg("instance"), py::arg("division") = "");
  m.def("run", &run, py::arg("config"), py::call_guard<py::gil_scoped_release>());
  m.def("sweep", &sweep, py::arg("base"), py::arg("family"), py::arg("lo"), py::arg("hi"), py::arg("couplings"),
        py::call_guard<py::gil_scoped_release>());
}
