#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/gil_safe_call_once.h>
#include <pybind11/stl.h>

#include <sstream>

#include "lkpos/catalog.hpp"
#include "lkpos/diffcalc.hpp"
#include "lkpos/error.hpp"
#include "lkpos/json_io.hpp"
#include "lkpos/kernelcheck.hpp"
#include "lkpos/levykhin.hpp"
#include "lkpos/reflection.hpp"
#include "lkpos/version.hpp"

#ifdef LKPOS_HAVE_CLI
#include "cli.hpp"
#endif

namespace py = pybind11;
using namespace lkpos;

namespace {

// Results cross the boundary as JSON text; the Python side decodes them.
std::string dump(const Json& j) { return j.dump(); }

Domain make_domain(double lo, double hi) {
  if (!(lo < hi)) throw Error(ErrorKind::InvalidArgument, "domain needs lo < hi");
  return Domain::open(lo, hi);
}

// Wraps a Python callable. Evaluation re-enters the interpreter, so every
// library call below runs with the GIL held.
FuncHandle wrap(py::function f, double lo, double hi) {
  return FuncHandle("python", make_domain(lo, hi), [f](double t) { return f(t).cast<double>(); });
}

FuncHandle catalog_func(const std::string& name, const std::map<std::string, double>& params) {
  return get(name, params).func;
}

std::string verdict(const PositivityVerdict& v) { return dump(to_json(v)); }

}  // namespace

PYBIND11_MODULE(_lkpos, m) {
  m.doc() = "Positivity checks for kernels and Levy-Khintchine representations.";
  m.attr("__version__") = kVersion;

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
  error_type.call_once_and_store_result(
      [&]() -> py::object { return py::exception<Error>(m, "LkposError", PyExc_ValueError); });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const py::object& type = error_type.get_stored();
      py::object inst = type(e.what());
      inst.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(type.ptr(), inst.ptr());
    }
  });

  m.def("catalog_names", &list);
  m.def(
      "catalog_entry",
      [](const std::string& name, const std::map<std::string, double>& params) {
        const CatalogEntry e = get(name, params);
        Json j = {{"name", e.name}, {"formula", e.formula}, {"domain", to_json(e.domain)}};
        Json params_json = Json::object(), known = Json::array(), refuted = Json::array();
        for (const auto& [k, v] : e.params) params_json[k] = number_json(v);
        for (const FlagClaim& c : e.known_flags) known.push_back(to_json(c));
        for (const FlagClaim& c : e.refuted_flags) refuted.push_back(to_json(c));
        j["params"] = params_json;
        j["known_flags"] = known;
        j["refuted_flags"] = refuted;
        j["lk_data"] = e.lk_data ? to_json(*e.lk_data) : Json(nullptr);
        return dump(j);
      },
      py::arg("name"), py::arg("params") = std::map<std::string, double>{});
  m.def(
      "catalog_eval",
      [](const std::string& name, const std::map<std::string, double>& params, const std::vector<double>& ts) {
        const FuncHandle f = catalog_func(name, params);
        std::vector<double> out;
        for (double t : ts) out.push_back(f(t));
        return out;
      },
      py::arg("name"), py::arg("params"), py::arg("ts"));
  m.def(
      "catalog_check",
      [](const std::string& name, const std::map<std::string, double>& params) {
        const CatalogEntry e = get(name, params);
        Json out = Json::array();
        for (const auto* flags : {&e.known_flags, &e.refuted_flags}) {
          for (const FlagClaim& c : *flags) {
            out.push_back({{"claim", to_json(c)},
                           {"expected", flags == &e.known_flags ? "PASS" : "FAIL"},
                           {"result", to_json(check_claim(e.func, c))}});
          }
        }
        return dump(out);
      },
      py::arg("name"), py::arg("params") = std::map<std::string, double>{});

  m.def(
      "gram_plus", [](py::function f, const std::vector<double>& pts, double lo, double hi) {
        return gram_plus(wrap(f, lo, hi), pts).entries;
      },
      py::arg("f"), py::arg("points"), py::arg("lo") = -kInf, py::arg("hi") = kInf);
  m.def(
      "gram_minus", [](py::function f, const std::vector<double>& pts, double lo, double hi) {
        return gram_minus(wrap(f, lo, hi), pts).entries;
      },
      py::arg("f"), py::arg("points"), py::arg("lo") = -kInf, py::arg("hi") = kInf);
  m.def(
      "psd_check",
      [](const Eigen::MatrixXd& g, const std::vector<double>& pts, std::optional<double> tol) {
        return verdict(psd_check(custom_gram(pts, g), tol));
      },
      py::arg("matrix"), py::arg("points"), py::arg("tol") = py::none());
  m.def(
      "cnd_check",
      [](const Eigen::MatrixXd& g, const std::vector<double>& pts, std::optional<double> tol) {
        return verdict(cnd_check(custom_gram(pts, g), tol));
      },
      py::arg("matrix"), py::arg("points"), py::arg("tol") = py::none());
  m.def(
      "completely_monotone_check",
      [](py::function f, const std::vector<double>& grid, double lo, double hi) {
        return verdict(completely_monotone_check(wrap(f, lo, hi), grid));
      },
      py::arg("f"), py::arg("grid"), py::arg("lo") = 0.0, py::arg("hi") = kInf);
  m.def(
      "bernstein_check",
      [](py::function f, const std::vector<double>& grid, double lo, double hi) {
        return verdict(bernstein_check(wrap(f, lo, hi), grid).overall);
      },
      py::arg("f"), py::arg("grid"), py::arg("lo") = 0.0, py::arg("hi") = kInf);
  m.def(
      "reflection_positive_check",
      [](py::function f, double a, int n) {
        ReflectionOptions opt;
        opt.n = n;
        return dump(to_json(reflection_positive_check(wrap(f, -kInf, kInf), a, opt)));
      },
      py::arg("f"), py::arg("a"), py::arg("n") = kDefaultGridSize);
  m.def(
      "reflection_negative_check",
      [](py::function f, double a, const std::vector<double>& hs, int n) {
        ReflectionOptions opt;
        opt.n = n;
        return dump(to_json(reflection_negative_check(wrap(f, -kInf, kInf), a, hs, opt)));
      },
      py::arg("f"), py::arg("a"), py::arg("hs") = dyadic_hs(10), py::arg("n") = kDefaultGridSize);
  m.def(
      "synth",
      [](const std::string& rep_json, const std::vector<double>& ts, const std::string& form, double tol) {
        const FuncHandle f = lk_function(lk_data_from_json(parse_json(rep_json), form), tol);
        std::vector<double> out;
        for (double t : ts) out.push_back(f(t));
        return out;
      },
      py::arg("rep"), py::arg("ts"), py::arg("form") = "", py::arg("tol") = 1e-10);
  m.def(
      "laplace",
      [](const std::string& measure_json, double t, double tol) {
        return laplace(measure_from_json(parse_json(measure_json)), t, tol).value;
      },
      py::arg("measure"), py::arg("t"), py::arg("tol") = 1e-12);
  m.def("e_lambda", &e_lambda, py::arg("lam"), py::arg("t"), py::arg("t0") = 0.0);
  m.def("f_lambda", &f_lambda, py::arg("lam"), py::arg("t"));

#ifdef LKPOS_HAVE_CLI
  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
#endif
}
