// Copyright 2026 The nqsdyn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "nqsdyn/checkpoint.hpp"
#include "nqsdyn/pipeline.hpp"

namespace py = pybind11;
using namespace nqsdyn;

namespace {

RunOptions make_options(std::optional<std::filesystem::path> checkpoint,
                        std::optional<std::filesystem::path> output, int workers,
                        std::optional<std::uint64_t> seed) {
  RunOptions o;
  o.checkpoint = std::move(checkpoint);
  o.output = std::move(output);
  o.workers = workers;
  o.seed = seed;
  return o;
}

// Returns (k_indices, omegas, S) with S shaped (n_k, n_omega).
py::tuple table_arrays(const SpectrumTable &t) {
  Eigen::MatrixXd s(t.k_indices.size(), t.omegas.size());
  for (std::size_t k = 0; k < t.k_indices.size(); ++k) {
    for (std::size_t w = 0; w < t.omegas.size(); ++w) s(Eigen::Index(k), Eigen::Index(w)) = t.at(k, w).s;
  }
  return py::make_tuple(t.k_indices, t.omegas, s);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "RBM ground states and dynamical structure factors of Heisenberg chains";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<OracleCapError>(m, "OracleCapError", PyExc_RuntimeError);

  py::class_<ModelSpec>(m, "ModelSpec")
      .def(py::init([](int length, double j1, double j2, bool periodic) {
             return ModelSpec{length, j1, j2, periodic};
           }),
           py::arg("length"), py::arg("j1") = 1.0, py::arg("j2") = 0.0, py::arg("periodic") = true)
      .def_readwrite("length", &ModelSpec::length)
      .def_readwrite("j1", &ModelSpec::j1)
      .def_readwrite("j2", &ModelSpec::j2)
      .def_readwrite("periodic", &ModelSpec::periodic)
      .def("__repr__", [](const ModelSpec &s) {
        std::ostringstream o;
        o << "ModelSpec(length=" << s.length << ", j1=" << s.j1 << ", j2=" << s.j2
          << ", periodic=" << (s.periodic ? "True" : "False") << ")";
        return o.str();
      });

  py::class_<RbmParameters>(m, "RbmParameters")
      .def(py::init<int, int>(), py::arg("n_visible"), py::arg("n_hidden"))
      .def_property_readonly("n_visible", &RbmParameters::n_visible)
      .def_property_readonly("n_hidden", &RbmParameters::n_hidden)
      .def("flatten", &RbmParameters::flatten)
      .def("assign_flat", &RbmParameters::assign_flat)
      .def("log_psi", [](const RbmParameters &p, const SpinConfig &c) { return log_psi(p, c); })
      .def("log_derivatives",
           [](const RbmParameters &p, const SpinConfig &c) { return log_derivatives(p, c); });
  m.def("init_random", &init_random, py::arg("n_visible"), py::arg("n_hidden"), py::arg("scale"),
        py::arg("seed"));

  m.def(
      "local_energy",
      [](const ModelSpec &model, const RbmParameters &p, const SpinConfig &c) {
        return local_energy(ChainHamiltonian(model), p, ChainState::make(p, c));
      },
      py::arg("model"), py::arg("params"), py::arg("config"));

  m.def(
      "exact_ground_energy",
      [](const ModelSpec &model, int sector) { return exact_ground_state(model, sector).energy; },
      py::arg("model"), py::arg("sector") = 0);
  m.def(
      "exact_spectrum",
      [](const ModelSpec &model, const std::vector<double> &omegas, double eta, std::vector<int> ks) {
        if (ks.empty()) {
          for (int k = 0; k < model.length; ++k) ks.push_back(k);
        }
        return table_arrays(exact_spectrum(model, omegas, eta, ks));
      },
      py::arg("model"), py::arg("omegas"), py::arg("eta"), py::arg("k_indices") = std::vector<int>{});
  m.def("frequency_grid", &frequency_grid, py::arg("omega_min"), py::arg("omega_max"), py::arg("step"));

  py::class_<RunConfig>(m, "RunConfig")
      .def_readwrite("model", &RunConfig::model)
      .def_readwrite("n_hidden", &RunConfig::n_hidden)
      .def_readwrite("output_directory", &RunConfig::output_directory)
      .def("validate", &RunConfig::validate)
      .def("to_ini", [](const RunConfig &c) { return format_config(c); });
  m.def("parse_config", &parse_config, py::arg("text"));
  m.def("load_config", &load_config, py::arg("path"));

  py::class_<GroundStateResult>(m, "GroundStateResult")
      .def_readonly("params", &GroundStateResult::params)
      .def_readonly("energy", &GroundStateResult::e0_estimate)
      .def_readonly("energy_error", &GroundStateResult::e0_error)
      .def_readonly("converged", &GroundStateResult::converged)
      .def_readonly("steps", &GroundStateResult::steps);

  m.def(
      "ground_state",
      [](const RunConfig &config, std::optional<std::filesystem::path> checkpoint,
         std::optional<std::filesystem::path> output, int workers, std::optional<std::uint64_t> seed) {
        std::ostringstream log;
        py::gil_scoped_release release;
        return cmd_ground_state(config, make_options(checkpoint, output, workers, seed), log).result;
      },
      py::arg("config"), py::arg("checkpoint") = py::none(), py::arg("output") = py::none(),
      py::arg("workers") = 1, py::arg("seed") = py::none());
  m.def(
      "spectrum",
      [](const RunConfig &config, std::optional<std::filesystem::path> checkpoint,
         std::optional<std::filesystem::path> output, int workers, std::optional<std::uint64_t> seed) {
        std::ostringstream log;
        SpectrumOutcome out;
        {
          py::gil_scoped_release release;
          out = cmd_spectrum(config, make_options(checkpoint, output, workers, seed), log);
        }
        return table_arrays(out.combined);
      },
      py::arg("config"), py::arg("checkpoint") = py::none(), py::arg("output") = py::none(),
      py::arg("workers") = 1, py::arg("seed") = py::none());
  m.def(
      "ed",
      [](const RunConfig &config, std::optional<std::filesystem::path> output) {
        std::ostringstream log;
        SpectrumTable table;
        {
          py::gil_scoped_release release;
          table = cmd_ed(config, make_options(std::nullopt, output, 1, std::nullopt), log);
        }
        return table_arrays(table);
      },
      py::arg("config"), py::arg("output") = py::none());
  m.def(
      "compare",
      [](const RunConfig &config, const std::filesystem::path &candidate, const std::filesystem::path &oracle,
         std::optional<std::filesystem::path> first_order, std::optional<std::filesystem::path> output) {
        std::ostringstream log;
        const ComparisonReport r =
            cmd_compare(config, make_options(std::nullopt, output, 1, std::nullopt), candidate, oracle, first_order, log);
        py::dict d;
        d["pass"] = r.pass;
        d["l2_pass"] = r.l2_pass;
        d["peaks_pass"] = r.peaks_pass;
        d["sum_rule_pass"] = r.sum_rule_pass;
        d["symmetry_pass"] = r.symmetry_pass;
        d["second_order_pass"] = r.second_order_pass;
        d["report"] = format_report(r);
        return d;
      },
      py::arg("config"), py::arg("candidate"), py::arg("oracle"), py::arg("first_order") = py::none(),
      py::arg("output") = py::none());

  m.def(
      "read_checkpoint",
      [](const std::filesystem::path &path) {
        const Checkpoint c = read_checkpoint(path);
        return py::make_tuple(c.params, c.e0);
      },
      py::arg("path"));
}
