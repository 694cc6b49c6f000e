#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "alearn/harness.hpp"
#include "alearn/minimax.hpp"
#include "alearn/model_selection.hpp"
#include "alearn/verify.hpp"

namespace py = pybind11;
using namespace alearn;

namespace {

ExperimentConfig config_from(const py::dict& kw) {
  ExperimentConfig cfg;
  for (auto item : kw) {
    auto key = py::str(item.first).cast<std::string>();
    py::object v = py::reinterpret_borrow<py::object>(item.second);
    std::string text;
    if (py::isinstance<py::list>(v) || py::isinstance<py::tuple>(v)) {
      for (auto e : v) text += py::str(e).cast<std::string>() + ",";
    } else {
      text = py::str(v).cast<std::string>();
    }
    apply_setting(cfg, key, text);
  }
  cfg.validate();
  return cfg;
}

py::dict trace_dict(const RunTrace& t, const Problem& p) {
  py::list iters;
  for (const auto& r : t.iterations) {
    py::dict d;
    d["k"] = r.k;
    d["N_k"] = r.N_k;
    d["N_act"] = r.N_act;
    d["m_hat"] = r.m_hat;
    d["delta_k"] = r.delta_k;
    d["pi_active"] = r.pi_active;
    d["remaining_LB"] = r.remaining_LB;
    iters.append(d);
  }
  py::dict out;
  out["iterations"] = iters;
  out["termination"] = std::string(to_string(t.termination));
  out["labels_used"] = t.labels_used();
  out["final_pi_active"] = t.final_pi_active;
  out["excess_risk"] = excess_risk(t.final_estimate, p, default_quad_level(p.dim));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Plug-in active learning on dyadic partitions";

  m.def("problem_names", &problem_names);
  m.def("bump_u", &bump_u, py::arg("x"), py::arg("v"));
  m.def("index_set", &index_set, py::arg("n"), py::arg("dim") = 1);

  m.def(
      "eta",
      [](const std::string& problem, std::vector<double> x) { return find_problem(problem).eta(x); },
      py::arg("problem"), py::arg("x"));

  m.def(
      "run_active",
      [](const std::string& problem, std::size_t budget, std::uint64_t seed, std::uint64_t run_id, double alpha, double K1,
         double band_D, const std::string& variant) {
        auto p = find_problem(problem);
        LearnerConfig cfg;
        cfg.budget_N = budget;
        cfg.alpha = alpha;
        cfg.K1 = K1;
        cfg.band_D = band_D;
        cfg.variant = parse_variant(variant);
        cfg.d = p.dim;
        py::gil_scoped_release release;
        auto trace = run_active(p, cfg, RunStream{seed, run_id});
        py::gil_scoped_acquire acquire;
        return trace_dict(trace, p);
      },
      py::arg("problem"), py::arg("budget"), py::arg("seed") = 1, py::arg("run_id") = 0, py::arg("alpha") = 0.05,
      py::arg("K1") = 1.5, py::arg("band_D") = 0.03, py::arg("variant") = "1a");

  m.def(
      "run_passive",
      [](const std::string& problem, std::size_t n, std::uint64_t seed, std::uint64_t run_id) {
        auto p = find_problem(problem);
        LearnerConfig cfg;
        cfg.budget_N = std::max<std::size_t>(n, 16);
        cfg.d = p.dim;
        auto r = run_passive(p, n, cfg, RunStream{seed, run_id});
        py::dict out;
        out["m_hat"] = r.m_hat;
        out["excess_risk"] = excess_risk(r.estimate, p, default_quad_level(p.dim));
        return out;
      },
      py::arg("problem"), py::arg("n"), py::arg("seed") = 1, py::arg("run_id") = 0);

  m.def(
      "run_csv",
      [](const py::kwargs& kw) {
        auto cfg = config_from(kw);
        std::ostringstream os;
        write_run_csv(os, cfg, run_experiment(cfg));
        return os.str();
      },
      "Run CSV for the given config keys (problem, budgets, replications, seed, ...).");

  m.def("rates_csv", [](const py::kwargs& kw) {
    auto cfg = config_from(kw);
    std::ostringstream os;
    write_rates_csv(os, cfg, compute_rates(cfg));
    return os.str();
  });

  m.def(
      "minimax_check",
      [](int d, int q, std::uint64_t seed) {
        MinimaxCheckParams params;
        params.d = d;
        params.q = q;
        params.seed = seed;
        py::list out;
        for (const auto& c : minimax_certificates(params)) {
          py::dict row;
          row["certificate"] = c.name;
          row["passed"] = c.passed;
          row["measured"] = c.measured;
          row["bound"] = c.bound;
          row["detail"] = c.detail;
          out.append(row);
        }
        return out;
      },
      py::arg("d") = 1, py::arg("q") = 16, py::arg("seed") = 1);

  m.def(
      "verify",
      [](const std::string& criterion, std::uint64_t seed) {
        VerifyOptions opts;
        opts.seed = seed;
        py::list out;
        for (int id : suite_criteria(criterion)) {
          CriterionResult r;
          {
            py::gil_scoped_release release;
            r = run_criterion(id, opts);
          }
          py::dict row;
          row["id"] = r.id;
          row["name"] = r.name;
          row["passed"] = r.passed;
          row["detail"] = r.detail;
          out.append(row);
        }
        return out;
      },
      py::arg("criterion") = "quick", py::arg("seed") = 1);

  m.attr("RUN_CSV_HEADER") = std::string(kRunCsvHeader);
  m.attr("RATES_CSV_HEADER") = std::string(kRatesCsvHeader);

  py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
}
