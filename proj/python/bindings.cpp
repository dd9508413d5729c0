// Copyright 2026 The semtx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "semtx/channel.hpp"
#include "semtx/cli.hpp"
#include "semtx/config.hpp"
#include "semtx/errors.hpp"
#include "semtx/experiment.hpp"
#include "semtx/phy.hpp"
#include "semtx/protocol.hpp"
#include "semtx/scheduler.hpp"

namespace py = pybind11;
using namespace semtx;

namespace {

Grid<double> to_grid(const std::vector<std::vector<double>>& rows) {
    const int h = static_cast<int>(rows.size());
    const int w = h ? static_cast<int>(rows[0].size()) : 0;
    Grid<double> g(w, h);
    for (int y = 0; y < h; ++y) {
        if (static_cast<int>(rows[y].size()) != w) throw InputError("ragged depth map");
        for (int x = 0; x < w; ++x) g(x, y) = rows[y][x];
    }
    return g;
}

py::tuple run_cli(const std::vector<std::string>& args) {
    std::vector<std::string> full{"semtx"};
    full.insert(full.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : full) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return py::make_tuple(code, out.str(), err.str());
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Predictive semantic video transmission simulator";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<InvariantViolation>(m, "InvariantViolation", PyExc_RuntimeError);

    m.def("path_loss_db", [](double d) { return channel::path_loss_db(d, channel::RadioParams{}); },
          py::arg("distance_m"));
    m.def("mobile_correction", &channel::mobile_correction, py::arg("ue_height_m"));
    m.def("noise_floor_dbm", &channel::noise_floor_dbm, py::arg("bandwidth_hz"));
    m.def("qam16_ber_awgn", &phy::qam16_ber_awgn, py::arg("es_n0_db"));
    m.def("ber_point",
          [](double snr, std::uint64_t bits, std::uint64_t seed) {
              const auto r = experiment::ber_point(snr, bits, seed);
              return py::dict(py::arg("bits") = r.bits, py::arg("errors") = r.errors,
                              py::arg("measured") = r.measured, py::arg("analytic") = r.analytic);
          },
          py::arg("es_n0_db"), py::arg("bits"), py::arg("seed") = 0);

    m.def("delta_exceed",
          [](const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b) {
              return protocol::delta_exceed(to_grid(a), to_grid(b));
          },
          py::arg("a"), py::arg("b"));

    m.def("plan_active",
          [](const std::vector<double>& snr, const std::vector<double>& L, double lambda_full, double lambda_part,
             double theta_full, double theta_part) {
              scheduler::PlannerParams p;
              p.lambda_full = lambda_full;
              p.lambda_part = lambda_part;
              p.theta_full_db = theta_full;
              p.theta_part_db = theta_part;
              const auto plan = scheduler::plan_active(snr, L, p);
              return py::make_tuple(plan.slots(), plan.objective_value, plan.infeasible);
          },
          py::arg("snr_db"), py::arg("L"), py::arg("lambda_full") = 4.0, py::arg("lambda_part") = 2.0,
          py::arg("theta_full_db") = 3.0, py::arg("theta_part_db") = -2.0);

    m.def("normalize_config", [](const std::string& text) { return config::serialize(config::parse(text)); },
          py::arg("text"), "Parse a config and return its canonical form.");

    m.def("simulate",
          [](const std::string& text, int parallel) {
              const auto cfg = config::parse(text);
              py::gil_scoped_release release;
              return experiment::summary_to_json(experiment::run(cfg, parallel));
          },
          py::arg("config_text"), py::arg("parallel") = 1, "Run the configured seeds; returns summary JSON.");

    m.def("run_cli", &run_cli, py::arg("args"), "Run the command line tool; returns (code, stdout, stderr).");
}
