#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include <bellman/bellman.hpp>
#include <bellman/martingale.hpp>
#include <bellman/report_io.hpp>
#include <bellman/verifier.hpp>

namespace py = pybind11;
using namespace bellman;

namespace {

BellmanPoint make_point(double x, double y, double w, double v) { return {x, y, w, v}; }

py::dict report_dict(const VerificationReport& rep) {
  py::dict d;
  d["check"] = rep.check;
  d["c"] = rep.c;
  d["points"] = rep.total_points;
  d["skipped"] = rep.skipped;
  d["violations"] = rep.violations;
  d["pass"] = rep.pass;
  d["worst_violation"] = rep.worst_violation;
  d["tolerance"] = rep.tolerance;
  d["witness"] = py::dict(
      py::arg("x") = rep.worst_witness.point.x, py::arg("y") = rep.worst_witness.point.y,
      py::arg("w") = rep.worst_witness.point.w, py::arg("v") = rep.worst_witness.point.v,
      py::arg("region") = to_string(rep.worst_witness.region));
  if (!rep.note.empty()) d["note"] = rep.note;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Explicit Burkholder function for the weighted L2 martingale-transform "
            "bound: evaluation, verification and exact dyadic simulation";

  py::class_<DomainParams>(m, "Params")
      .def(py::init<double>(), py::arg("c"))
      .def_readonly("c", &DomainParams::c)
      .def_readonly_static("beta", &DomainParams::kBeta)
      .def_readonly_static("kappa", &DomainParams::kKappa)
      .def_readonly_static("majorant_c_squared", &DomainParams::kMajorantCSquared)
      .def("__repr__",
           [](const DomainParams& p) { return "Params(c=" + std::to_string(p.c) + ")"; });

  // kernels
  m.def(
      "phi", [](double t, double c) { return eval_phi(t, DomainParams(c)); }, py::arg("t"),
      py::arg("c"));
  m.def(
      "phi_derivatives",
      [](double t, double c) { return eval_phi_derivatives(t, DomainParams(c)); },
      py::arg("t"), py::arg("c"));
  m.def(
      "psi_family",
      [](double t, double c) {
        const KernelValue k = eval_psi_family(t, DomainParams(c));
        py::dict d;
        d["t"] = k.t;
        d["phi"] = k.phi;
        d["phi_d1"] = k.phi_d1;
        d["phi_d2"] = k.phi_d2;
        d["psi"] = k.psi;
        d["psi_hat"] = k.psi_hat;
        d["psi_hat_d1"] = k.psi_hat_d1;
        d["psi_hat_d2"] = k.psi_hat_d2;
        return d;
      },
      py::arg("t"), py::arg("c"));

  // core evaluation
  m.def(
      "classify_region",
      [](double x, double y, double w, double v, double c) {
        return std::string(to_string(classify_region(make_point(x, y, w, v), DomainParams(c))));
      },
      py::arg("x"), py::arg("y"), py::arg("w"), py::arg("v"), py::arg("c"));
  m.def(
      "eval_b",
      [](int i, double x, double y, double w, double v, double c) {
        return eval_b(i, make_point(x, y, w, v), DomainParams(c));
      },
      py::arg("i"), py::arg("x"), py::arg("y"), py::arg("w"), py::arg("v"), py::arg("c"));
  m.def(
      "eval_U",
      [](double x, double y, double w, double v, double c) {
        return eval_U(make_point(x, y, w, v), DomainParams(c));
      },
      py::arg("x"), py::arg("y"), py::arg("w"), py::arg("v"), py::arg("c"));
  m.def(
      "eval_G",
      [](double x, double y, double w, double v, double c) {
        return eval_G(make_point(x, y, w, v), DomainParams(c));
      },
      py::arg("x"), py::arg("y"), py::arg("w"), py::arg("v"), py::arg("c"));
  m.def(
      "eval_B",
      [](double x, double y, double w, double v, double c) {
        const BellmanEval e = eval_B(make_point(x, y, w, v), DomainParams(c));
        py::dict d;
        d["value"] = e.value;
        d["region"] = std::string(to_string(e.region));
        d["gradient"] = e.gradient;
        d["hessian"] = e.hessian;
        d["on_piece_boundary"] = e.on_piece_boundary;
        d["degenerate_hessian"] = e.degenerate_hessian;
        return d;
      },
      py::arg("x"), py::arg("y"), py::arg("w"), py::arg("v"), py::arg("c"));
  m.def(
      "majorization_gap",
      [](double x, double y, double w, double v, double c) {
        return majorization_gap(make_point(x, y, w, v), DomainParams(c));
      },
      py::arg("x"), py::arg("y"), py::arg("w"), py::arg("v"), py::arg("c"));
  m.def(
      "directional_second_derivative",
      [](double x, double y, double w, double v, double c, double d, double e, double r,
         double s) {
        return directional_second_derivative(make_point(x, y, w, v), Direction{d, e, r, s},
                                             DomainParams(c));
      },
      py::arg("x"), py::arg("y"), py::arg("w"), py::arg("v"), py::arg("c"), py::arg("d"),
      py::arg("e"), py::arg("r"), py::arg("s"));
  m.def(
      "eval_B_maximal",
      [](double x, double y, double z, double w, double v, double c) {
        return eval_B_maximal(MaxPoint{x, y, z, w, v}, DomainParams(c));
      },
      py::arg("x"), py::arg("y"), py::arg("z"), py::arg("w"), py::arg("v"), py::arg("c"));
  m.def(
      "constrained_max_form",
      [](double x, double y, double w, double v, double c, int lambda_samples) {
        const auto [val, dir] =
            constrained_max_form(make_point(x, y, w, v), DomainParams(c), lambda_samples);
        return py::make_tuple(val, py::make_tuple(dir.d, dir.e, dir.r, dir.s));
      },
      py::arg("x"), py::arg("y"), py::arg("w"), py::arg("v"), py::arg("c"),
      py::arg("lambda_samples") = 41);
  m.def(
      "fd_check",
      [](double x, double y, double w, double v, double c, double h) {
        const FdReport rep = fd_check(make_point(x, y, w, v), DomainParams(c), h);
        return py::make_tuple(rep.grad_discrepancy, rep.hess_discrepancy);
      },
      py::arg("x"), py::arg("y"), py::arg("w"), py::arg("v"), py::arg("c"),
      py::arg("h") = 1e-4);

  // verification
  m.def(
      "verify",
      [](const std::vector<std::string>& suites, const std::vector<double>& c_values,
         int grid, long target_points, double tol, int workers, bool exact_rational) {
        GridSpec g;
        if (!c_values.empty()) g.c_values = c_values;
        g.points_per_axis = grid;
        g.target_points = target_points;
        g.workers = workers;
        const std::optional<double> tol_opt =
            tol > 0 ? std::optional<double>(tol) : std::nullopt;
        py::list out;
        for (const auto& suite : suites) {
          for (const auto& rep : run_suite(suite, g, tol_opt, exact_rational)) {
            out.append(report_dict(rep));
          }
        }
        return out;
      },
      py::arg("suites"), py::arg("c_values") = std::vector<double>{}, py::arg("grid") = 21,
      py::arg("target_points") = 0, py::arg("tol") = 0.0, py::arg("workers") = 0,
      py::arg("exact_rational") = false);
  m.def("known_suites", &known_suites);
  m.def("exact_certificates", [] {
    py::list out;
    for (const auto& cert : domain2_exact_certificates()) out.append(cert.summary());
    for (const auto& cert : domain3_exact_certificates()) out.append(cert.summary());
    return out;
  });

  // simulation
  m.def(
      "simulate",
      [](long trees, int depth, double c_target, std::uint64_t seed, const std::string& h_law,
         const std::string& weight_law, double h_value) {
        SimConfig cfg;
        cfg.num_trees = trees;
        cfg.depth = depth;
        cfg.c_target = c_target;
        cfg.seed = seed;
        cfg.h_law = h_law_from_string(h_law);
        cfg.weight_law = weight_law_from_string(weight_law);
        cfg.h_value = h_value;
        const EnsembleSummary s = run_ensemble(cfg);
        py::dict d;
        d["trees"] = s.trees;
        d["depth"] = s.depth;
        d["c_target"] = s.c_target;
        d["max_characteristic"] = s.max_characteristic;
        d["max_l2_ratio"] = s.max_l2_ratio;
        d["max_one_sided_ratio"] = s.max_one_sided_ratio;
        d["max_two_sided_ratio"] = s.max_two_sided_ratio;
        d["max_raw_ratio"] = s.max_raw_ratio;
        d["sm_violations"] = s.sm_violations;
        d["sm_eligible"] = s.sm_eligible;
        d["sm_skipped"] = s.sm_skipped;
        d["pass"] = s.pass;
        return d;
      },
      py::arg("trees") = 100, py::arg("depth") = 8, py::arg("c_target") = 4.0,
      py::arg("seed") = 1, py::arg("h_law") = "greedy", py::arg("weight_law") = "two-point",
      py::arg("h_value") = 1.0);
  m.def(
      "tree_csv",
      [](int depth, double c_target, std::uint64_t seed, const std::string& h_law,
         const std::string& weight_law) {
        SimConfig cfg;
        cfg.depth = depth;
        cfg.c_target = c_target;
        cfg.seed = seed;
        cfg.h_law = h_law_from_string(h_law);
        cfg.weight_law = weight_law_from_string(weight_law);
        const DyadicTree tree = make_tree(cfg, 0);
        std::ostringstream os;
        write_tree_csv(tree, os);
        return os.str();
      },
      py::arg("depth") = 4, py::arg("c_target") = 2.0, py::arg("seed") = 1,
      py::arg("h_law") = "greedy", py::arg("weight_law") = "two-point");

#ifdef VERSION_INFO
  m.attr("__version__") = VERSION_INFO;
#else
  m.attr("__version__") = "dev";
#endif
}
