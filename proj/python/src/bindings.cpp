#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pdqp/autodiff.hpp"
#include "pdqp/bench.hpp"
#include "pdqp/errors.hpp"
#include "pdqp/checkpoint.hpp"
#include "pdqp/gap_bound.hpp"
#include "pdqp/generator.hpp"
#include "pdqp/json_io.hpp"
#include "pdqp/loss.hpp"
#include "pdqp/net.hpp"
#include "pdqp/qps_reader.hpp"
#include "pdqp/solver.hpp"
#include "pdqp/trainer.hpp"

namespace py = pybind11;
using namespace pdqp;

namespace {

PrimalDualPoint point_from_pair(const std::vector<double>& x, const std::vector<double>& y) {
  return PrimalDualPoint{x, y};
}

py::dict residuals_dict(const KktResiduals& r) {
  py::dict d;
  d["primal"] = r.rel_primal;
  d["dual"] = r.rel_dual;
  d["gap"] = r.rel_gap;
  d["primal_objective"] = r.primal_objective;
  d["dual_objective"] = r.dual_objective;
  d["bound_objective"] = r.bound_objective;
  return d;
}

py::dict report_dict(const SolveReport& rep) {
  py::dict d;
  d["x"] = rep.point.x;
  d["y"] = rep.point.y;
  d["iterations"] = rep.iterations;
  d["outer_restarts"] = rep.outer_restarts;
  d["wall_seconds"] = rep.wall_seconds;
  d["converged"] = rep.termination == Termination::Converged;
  d["residuals"] = residuals_dict(rep.final_residuals);
  return d;
}

}  // namespace

PYBIND11_MODULE(_pdqp, m) {
  m.doc() = "Restarted accelerated primal-dual QP solver and its unrolled network";

  py::register_exception<ContractViolation>(m, "ContractViolation");
  py::register_exception<ParseError>(m, "ParseError");
  py::register_exception<DivergedError>(m, "DivergedError");

  py::class_<QpInstance>(m, "QpInstance")
      .def_readonly("name", &QpInstance::name)
      .def_readonly("n", &QpInstance::n)
      .def_readonly("m", &QpInstance::m)
      .def("nnz", &QpInstance::nnz)
      .def("to_json", &write_instance_json)
      .def("__repr__", [](const QpInstance& q) {
        return "<QpInstance '" + q.name + "' n=" + std::to_string(q.n) +
               " m=" + std::to_string(q.m) + ">";
      });

  py::class_<NetParams>(m, "NetParams")
      .def_property_readonly("layers",
                             [](const NetParams& p) { return p.config.layers; })
      .def_property_readonly("width", [](const NetParams& p) { return p.config.width; });

  m.def("load_instance", &load_instance_file, py::arg("path"),
        "Load a .json or .qps instance file");
  m.def("parse_qps", py::overload_cast<const std::string&>(&parse_qps), py::arg("text"));
  m.def("instance_from_json", &read_instance_json, py::arg("text"));

  m.def(
      "generate",
      [](std::size_t n, std::size_t m_, double density, double feasibility, double upper_bound,
         std::uint64_t seed) {
        GeneratorConfig cfg;
        cfg.n = n;
        cfg.m = m_;
        cfg.density = density;
        cfg.feasibility = feasibility;
        cfg.upper_bound = upper_bound;
        cfg.seed = seed;
        return generate_synthetic(cfg);
      },
      py::arg("n"), py::arg("m"), py::arg("density") = 0.3, py::arg("feasibility") = 0.8,
      py::arg("upper_bound") = 10.0, py::arg("seed") = 0);

  m.def(
      "solve",
      [](const QpInstance& inst, double tol, std::size_t max_outer, std::size_t check_every,
         std::optional<std::pair<std::vector<double>, std::vector<double>>> warm_start) {
        SolverConfig cfg;
        cfg.tol = tol;
        cfg.max_outer = max_outer;
        cfg.check_every = check_every;
        if (warm_start) cfg.warm_start = point_from_pair(warm_start->first, warm_start->second);
        return report_dict(solve(inst, cfg));
      },
      py::arg("instance"), py::arg("tol") = 1e-6, py::arg("max_outer") = 1000,
      py::arg("check_every") = 40, py::arg("warm_start") = std::nullopt);

  m.def(
      "full_residuals",
      [](const QpInstance& inst, const std::vector<double>& x, const std::vector<double>& y) {
        return residuals_dict(full_residuals(inst, point_from_pair(x, y)));
      },
      py::arg("instance"), py::arg("x"), py::arg("y"));

  m.def(
      "unsupervised_loss",
      [](const QpInstance& inst, const std::vector<double>& x, const std::vector<double>& y) {
        const LossValue v = unsupervised_loss(inst, point_from_pair(x, y));
        py::dict d;
        d["total"] = v.total;
        d["primal"] = v.components[0];
        d["dual"] = v.components[1];
        d["gap"] = v.components[2];
        return d;
      },
      py::arg("instance"), py::arg("x"), py::arg("y"));

  m.def(
      "alignment_params",
      [](const QpInstance& inst, std::size_t layers, int norm_iters) {
        StepSchedule s;
        s.norm_q = spectral_norm_estimate(inst.quad, norm_iters, 20240601);
        s.norm_a = spectral_norm_estimate(inst.constraints, norm_iters, 20240602);
        if (s.norm_a <= 0.0) s.norm_a = 1.0;
        s.restart_len = layers;
        return alignment_params(s, layers);
      },
      py::arg("instance"), py::arg("layers") = 8, py::arg("norm_iters") = 100);

  m.def(
      "init_params",
      [](std::size_t layers, std::size_t width, double norm_q, double norm_a,
         std::uint64_t seed, double noise) {
        NetConfig cfg;
        cfg.layers = layers;
        cfg.width = width;
        return init_params(cfg, norm_q, norm_a, seed, noise);
      },
      py::arg("layers") = 8, py::arg("width") = 16, py::arg("norm_q") = 1.0,
      py::arg("norm_a") = 1.0, py::arg("seed") = 0, py::arg("noise") = 0.01);

  m.def(
      "forward",
      [](const QpInstance& inst, const NetParams& params) {
        const PrimalDualPoint out = forward(inst, params);
        return py::make_tuple(out.x, out.y);
      },
      py::arg("instance"), py::arg("params"));

  m.def(
      "train",
      [](const std::vector<QpInstance>& instances, std::size_t layers, std::size_t width,
         double lr, std::size_t max_steps, std::size_t batch, const std::string& loss_mode,
         std::uint64_t seed,
         std::optional<std::vector<std::pair<std::vector<double>, std::vector<double>>>>
             labels) {
        NetConfig nc;
        nc.layers = layers;
        nc.width = width;
        TrainConfig tc;
        tc.lr = lr;
        tc.max_steps = max_steps;
        tc.batch = batch;
        tc.seed = seed;
        if (loss_mode == "supervised") tc.loss_mode = LossMode::Supervised;
        std::vector<PrimalDualPoint> lbl;
        const std::vector<PrimalDualPoint>* lbl_ptr = nullptr;
        if (labels) {
          for (const auto& p : *labels) lbl.push_back(point_from_pair(p.first, p.second));
          lbl_ptr = &lbl;
        }
        const TrainResult r = train(instances, tc, nc, lbl_ptr);
        py::dict d;
        d["params"] = r.params;
        d["steps_run"] = r.steps_run;
        d["early_stopped"] = r.early_stopped;
        std::vector<double> totals;
        for (const auto& row : r.history) totals.push_back(row.total);
        d["loss_history"] = totals;
        return d;
      },
      py::arg("instances"), py::arg("layers") = 8, py::arg("width") = 16, py::arg("lr") = 1e-4,
      py::arg("max_steps") = 1000, py::arg("batch") = 8, py::arg("loss_mode") = "unsupervised",
      py::arg("seed") = 0, py::arg("labels") = std::nullopt);

  m.def("save_checkpoint", &save_checkpoint, py::arg("params"), py::arg("path"));
  m.def("load_checkpoint", &load_checkpoint, py::arg("path"));

  m.def(
      "gradcheck",
      [](const QpInstance& inst, std::size_t layers, std::size_t width, std::uint64_t seed) {
        NetConfig cfg;
        cfg.layers = layers;
        cfg.width = width;
        return gradcheck(cfg, inst, seed);
      },
      py::arg("instance"), py::arg("layers") = 3, py::arg("width") = 4, py::arg("seed") = 0);

  m.def(
      "perturbation_study",
      [](const QpInstance& inst, const std::vector<double>& x, const std::vector<double>& y,
         std::size_t samples, double max_radius, std::uint64_t seed) {
        const auto table = perturbation_study(inst, point_from_pair(x, y), samples, max_radius,
                                              seed);
        std::vector<std::pair<double, double>> rows;
        for (const auto& s : table) rows.emplace_back(s.distance, s.gap);
        return rows;
      },
      py::arg("instance"), py::arg("x"), py::arg("y"), py::arg("samples") = 200,
      py::arg("max_radius") = 1.0, py::arg("seed") = 0);
}
