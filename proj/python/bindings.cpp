#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stabsgd/baselines.hpp"
#include "stabsgd/cli.hpp"
#include "stabsgd/config.hpp"
#include "stabsgd/data_io.hpp"
#include "stabsgd/metrics.hpp"
#include "stabsgd/model_io.hpp"
#include "stabsgd/schedule.hpp"
#include "stabsgd/sgd_core.hpp"
#include "stabsgd/synth.hpp"
#include "stabsgd/trainer.hpp"

namespace py = pybind11;
using namespace stabsgd;

namespace {

void reject_unknown(const Settings& s) {
  if (const auto bad = unknown_keys(s); !bad.empty()) {
    throw py::key_error("unknown setting: " + bad.front());
  }
}

// Keyword arguments become key=value settings, so names match the config file.
Settings settings_from(const py::kwargs& kwargs) {
  Settings s;
  for (const auto& [k, v] : kwargs) {
    std::string value;
    if (py::isinstance<py::bool_>(v)) {
      value = v.cast<bool>() ? "true" : "false";
    } else {
      value = py::str(v).cast<std::string>();
    }
    s[k.cast<std::string>()] = value;
  }
  reject_unknown(s);
  return s;
}

py::dict stage_dict(const StageRecord& r) {
  py::dict d;
  d["stage"] = r.stage;
  d["beta"] = r.beta;
  d["g0"] = r.g0;
  d["K"] = r.K;
  d["omega_size"] = r.omega_size;
  d["d"] = r.d;
  d["path_sparsity_pct"] = r.path_sparsity;
  d["relative_change"] = r.relative_change;
  d["samples_per_path"] = r.samples_per_path;
  return d;
}

}  // namespace

PYBIND11_MODULE(_stabsgd, m) {
  m.doc() = "Stabilized truncated SGD for sparse linear classifiers";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_ArithmeticError);

  py::class_<Dataset>(m, "Dataset")
      .def_property_readonly("size", &Dataset::size)
      .def_property_readonly("dim", &Dataset::dim)
      .def_property_readonly("density", &Dataset::density)
      .def("__len__", &Dataset::size)
      .def("labels",
           [](const Dataset& d) {
             std::vector<int> y;
             for (const auto& s : d.samples()) y.push_back(static_cast<int>(s.y));
             return y;
           })
      .def("nnz_per_feature",
           [](const Dataset& d) {
             auto v = d.nnz_per_feature();
             return std::vector<std::size_t>(v.begin(), v.end());
           })
      .def("to_libsvm", [](const Dataset& d) {
        std::ostringstream out;
        write_libsvm(out, d);
        return out.str();
      });

  m.def("parse_libsvm", [](const std::string& text, std::optional<std::size_t> dim) { return parse_libsvm(text, dim); },
        py::arg("text"), py::arg("dim") = py::none());
  m.def("load_libsvm", &load_libsvm, py::arg("path"), py::arg("dim") = py::none());
  m.def("save_libsvm", &save_libsvm, py::arg("path"), py::arg("data"));
  m.def("normalize_unit_variance", &normalize_unit_variance);
  m.def("permute", &permute, py::arg("data"), py::arg("seed"));
  m.def("split", &split, py::arg("data"), py::arg("train_fraction"), py::arg("seed"));

  m.def("synthesize",
        [](std::size_t p, std::size_t n, double density_lo, double density_hi, std::size_t support, double noise,
           std::uint64_t seed) {
          SynthConfig cfg{p, n, density_lo, density_hi, support, noise, seed};
          cfg.validate();
          const SynthProblem prob = make_problem(cfg);
          return py::make_tuple(prob.sample(n, seed, noise), prob.support, prob.w_star);
        },
        py::arg("p") = 1000, py::arg("n") = 500, py::arg("density_lo") = 0.005, py::arg("density_hi") = 0.5,
        py::arg("support") = 10, py::arg("noise") = 0.1, py::arg("seed") = 1,
        "Returns (dataset, support indices, true weights).");

  m.def("soft_threshold",
        [](const DenseVector& w, const DenseVector& g) { return soft_threshold(std::span<const double>(w), g); },
        py::arg("w"), py::arg("g"));
  m.def("soft_threshold_scalar", py::overload_cast<double, double>(&soft_threshold), py::arg("w"), py::arg("g"));
  m.def("anneal_rejection", py::overload_cast<double, double, double>(&anneal_rejection), py::arg("d"),
        py::arg("beta0"), py::arg("gamma"));
  m.def("adaptive_gravity",
        [](const std::vector<double>& m, double beta, double fallback) { return adaptive_gravity(m, beta, fallback); },
        py::arg("magnitudes"), py::arg("beta"), py::arg("fallback") = 0.0);
  m.def("loss_value", [](const std::string& loss, double f, int y) {
    return loss_value(parse_loss(loss), f, y > 0 ? Label::Positive : Label::Negative);
  });

  m.def("train",
        [](const Dataset& data, const std::string& loss, const py::kwargs& kwargs) {
          TrainConfig cfg;
          const Settings s = settings_from(kwargs);
          apply_settings(cfg, s);
          cfg.validate();
          TrainResult r;
          {
            py::gil_scoped_release release;
            r = train(data, parse_loss(loss), cfg);
          }
          py::dict out;
          out["w"] = r.w_bar;
          out["omega"] = r.omega_hat.members();
          py::list hist;
          for (const auto& rec : r.history) hist.append(stage_dict(rec));
          out["history"] = hist;
          out["converged"] = r.converged;
          return out;
        },
        py::arg("data"), py::arg("loss") = "hinge",
        "Stabilized training; keyword arguments use the config-file names (pi0, beta0, M, passes, ...). "
        "Returns a dict with w, omega, history and converged.");

  m.def("baseline",
        [](const std::string& algo, const Dataset& data, const std::string& loss, const py::kwargs& kwargs) {
          BaselineConfig cfg;
          cfg.kind = parse_baseline(algo);
          apply_settings(cfg, settings_from(kwargs));
          cfg.validate();
          py::gil_scoped_release release;
          return run_baseline(data, parse_loss(loss), cfg);
        },
        py::arg("algo"), py::arg("data"), py::arg("loss") = "hinge",
        "Runs sgd, truncated, rda or fobos; keyword arguments use the config-file names.");

  m.def("test_error", [](const DenseVector& w, const Dataset& d) { return test_error(w, d); });
  m.def("sparsity_pct", [](const DenseVector& w) { return sparsity_pct(w); });
  m.def("cohens_kappa", [](std::size_t p, std::vector<Index> a, std::vector<Index> b) {
    return cohens_kappa(FeatureSet(p, std::move(a)), FeatureSet(p, std::move(b)));
  });
  m.def("stability_score", [](const std::vector<DenseVector>& models) {
    std::vector<FeatureSet> sets;
    for (const auto& w : models) sets.push_back(selected_set(w));
    return stability_score(sets);
  });
  m.def("save_model", &save_model);
  m.def("load_model", &load_model);

  m.def("run_cli",
        [](const std::vector<std::string>& args) {
          std::ostringstream out, err;
          const int code = run_cli(args, out, err);
          return py::make_tuple(code, out.str(), err.str());
        },
        "Runs the command-line harness in process; returns (exit code, stdout, stderr).");
}
