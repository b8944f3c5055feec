#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "torlab/bounds.hpp"
#include "torlab/error.hpp"
#include "torlab/harness.hpp"
#include "torlab/morrey.hpp"
#include "torlab/oscillation.hpp"
#include "torlab/projection.hpp"
#include "torlab/sampling.hpp"
#include "torlab/serialize.hpp"
#include "torlab/torus.hpp"
#include "torlab/zoo.hpp"

namespace py = pybind11;
using namespace torlab;

namespace {

Dimension to_dimension(const py::object& n) {
  if (py::isinstance<py::str>(n)) return Dimension::parse(n.cast<std::string>());
  return Dimension::exact(n.cast<std::uint64_t>());
}

SubtorusSpec make_subtorus(std::size_t n, const std::vector<std::size_t>& axes,
                           const std::optional<std::vector<double>>& base) {
  return SubtorusSpec::make(n, axes, base ? TorusPoint::wrap(*base) : TorusPoint::origin(n));
}

py::dict moment_dict(const MomentResult& r) {
  py::dict d;
  d["value"] = r.value;
  d["std_error"] = r.std_error;
  d["moment"] = r.moment;
  d["method"] = std::string(to_string(r.method));
  d["bound"] = r.bound;
  d["satisfied"] = r.satisfied;
  d["terms"] = r.terms;
  return d;
}

std::string dump(const Json& j) { return j.dump(); }

}  // namespace

PYBIND11_MODULE(_torlab, m) {
  m.doc() = "Native core of the torlab numerical laboratory";

  static py::exception<Error> error_type(m, "TorlabError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error_type, (std::string(to_string(e.code())) + ": " + e.what()).c_str());
    }
  });

  m.def("torus_dist", [](const std::vector<double>& x, const std::vector<double>& y) {
    return torus_dist(x, y);
  });
  m.def("wrap", [](const std::vector<double>& x) {
    const TorusPoint p = wrap(x);
    return std::vector<double>(p.coords().begin(), p.coords().end());
  });
  m.def("displacement", [](const std::vector<double>& x, const std::vector<double>& y) {
    return displacement(x, y);
  });
  m.def("sample_subset", [](std::size_t n, std::size_t k, std::uint64_t seed, std::uint64_t stream,
                            std::uint64_t index) {
    return sample_subset(n, k, SeedSpec{seed, stream, index});
  }, py::arg("n"), py::arg("k"), py::arg("seed") = 0, py::arg("stream") = 0, py::arg("index") = 0);

  py::class_<SubtorusSpec>(m, "Subtorus")
      .def(py::init(&make_subtorus), py::arg("n"), py::arg("axes"), py::arg("base") = py::none())
      .def_property_readonly("ambient_dim", &SubtorusSpec::ambient_dim)
      .def_property_readonly("dim", &SubtorusSpec::dim)
      .def_property_readonly("free_axes", [](const SubtorusSpec& s) {
        return std::vector<std::size_t>(s.free_axes().begin(), s.free_axes().end());
      })
      .def("to_json", [](const SubtorusSpec& s) { return dump(to_json(s)); });

  py::class_<FunctionSpec>(m, "Function")
      .def_static("from_json", [](const std::string& text) {
        return function_from_json(Json::parse(text));
      })
      .def_property_readonly("family", [](const FunctionSpec& f) { return std::string(family_name(f.family())); })
      .def_property_readonly("ambient_dim", &FunctionSpec::ambient_dim)
      .def_property_readonly("lipschitz_constant", &FunctionSpec::lipschitz_constant)
      .def("scaled", &FunctionSpec::scaled)
      .def("__call__", [](const FunctionSpec& f, const std::vector<double>& x) { return f.eval(x); })
      .def("grad", [](const FunctionSpec& f, const std::vector<double>& x) { return f.grad(x); })
      .def("grad_fd", [](const FunctionSpec& f, const std::vector<double>& x, double h) {
        return zoo_grad_fd(f, wrap(x), h);
      }, py::arg("x"), py::arg("h") = kFiniteDifferenceStep)
      .def("to_json", [](const FunctionSpec& f) { return dump(to_json(f)); });

  m.def("families", [] {
    std::vector<std::string> out;
    for (Family f : all_families()) out.emplace_back(family_name(f));
    return out;
  });

  m.def("theorem1_k", [](const py::object& n, double eps) { return theorem1_k(to_dimension(n), eps); });
  m.def("max_admissible_k", [](const py::object& n, double eps, double alpha) {
    return max_admissible_k(to_dimension(n), eps, alpha);
  });
  m.def("delta_of", &delta_of);
  m.def("check_lemma1", [](const py::object& n, double eps, double alpha, int k, double perturbation) {
    const auto r = check_lemma1(to_dimension(n), eps, alpha, k, kDefaultConstantC, perturbation);
    py::dict d;
    d["admissible"] = r.admissible;
    d["holds"] = r.holds();
    d["delta_identity"] = r.delta_identity;
    d["p"] = r.params.p;
    d["delta"] = r.params.delta;
    d["slack_main"] = static_cast<double>(r.main.slack());
    d["slack_half_n"] = static_cast<double>(r.half_n.slack());
    d["slack_sufficient"] = static_cast<double>(r.sufficient.slack());
    d["slack_strong"] = static_cast<double>(r.strong.slack());
    return d;
  }, py::arg("n"), py::arg("eps"), py::arg("alpha"), py::arg("k"), py::arg("delta_perturbation") = 1.0);
  m.def("avoid_probability", &avoid_probability);
  m.def("avoid_probability_exact", [](std::uint64_t n, std::uint64_t k, std::uint64_t mm) {
    const Rational r = avoid_probability_exact(n, k, mm);
    return py::make_tuple(numerator(r).str(), denominator(r).str());
  });

  m.def("exact_projection_moment", [](const std::vector<double>& v, std::size_t k, double p, double eps,
                                      double alpha) {
    return moment_dict(exact_projection_moment(v, k, p, eps, alpha));
  }, py::arg("v"), py::arg("k"), py::arg("p"), py::arg("eps") = 1.0, py::arg("alpha") = 1.0);
  m.def("mc_projection_moment", [](const std::vector<double>& v, std::size_t k, double p, std::size_t samples,
                                   std::uint64_t seed, double eps, double alpha, unsigned threads) {
    return moment_dict(mc_projection_moment(v, k, p, samples, SeedSpec{seed, 0, 0}, eps, alpha, threads));
  }, py::arg("v"), py::arg("k"), py::arg("p"), py::arg("samples") = 100000, py::arg("seed") = 0,
     py::arg("eps") = 1.0, py::arg("alpha") = 1.0, py::arg("threads") = 1);

  m.def("grid_osc", [](const FunctionSpec& f, const SubtorusSpec& sub, std::size_t mm, unsigned threads) {
    return dump(to_json(grid_osc(f, sub, mm, threads)));
  }, py::arg("f"), py::arg("sub"), py::arg("m") = 32, py::arg("threads") = 1);
  m.def("refine_osc", [](const FunctionSpec& f, const SubtorusSpec& sub, double gap, std::size_t budget) {
    return dump(to_json(refine_osc(f, sub, gap, budget)));
  }, py::arg("f"), py::arg("sub"), py::arg("target_gap") = 1e-3, py::arg("budget") = 1000000);
  m.def("osc_decision", [](const FunctionSpec& f, const SubtorusSpec& sub, double eps) {
    return std::string(to_string(osc_success_indicator(f, sub, eps, GapPolicy{}).decision));
  });

  m.def("density_qnorm", [](std::size_t k, double alpha) {
    const auto r = density_qnorm(k, alpha);
    py::dict d;
    d["p"] = r.p;
    d["q"] = r.q;
    d["value"] = r.value;
    d["integral"] = r.integral;
    d["printed_value"] = r.printed_value;
    d["c_alpha_k"] = r.c_alpha_k;
    d["within_c_alpha_k"] = r.within_c_alpha_k;
    return d;
  });
  m.def("morrey_bound", &morrey_bound);
  m.def("build_path", [](const std::vector<double>& x, const std::vector<double>& y, const std::string& mode) {
    return dump(to_json(build_path(wrap(x), wrap(y), parse_path_mode(mode))));
  }, py::arg("x"), py::arg("y"), py::arg("mode") = "equal");

  m.def("run_experiment", [](const std::string& config) {
    const ExperimentConfig c = config_from_json(Json::parse(config));
    Json out = Json::array();
    if (c.experiment == Experiment::Battery) {
      for (const auto& r : run_battery(c).records) out.push_back(to_json(r));
    } else {
      py::gil_scoped_release release;
      for (const auto& r : run_experiment(c)) out.push_back(to_json(r));
    }
    return dump(out);
  });
  m.def("run_battery", [](const std::string& config) {
    const ExperimentConfig c = config_from_json(Json::parse(config));
    const BatteryReport rep = run_battery(c);
    std::vector<py::tuple> checks;
    for (const auto& ch : rep.checks) checks.push_back(py::make_tuple(ch.name, ch.passed, ch.detail));
    return py::make_tuple(rep.passed(), checks);
  });
  m.def("serialize_config", [](const std::string& config) {
    return serialize_config(config_from_json(Json::parse(config)));
  });
}
