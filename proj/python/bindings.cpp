#include <optional>
#include <string>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "dsaddle/instance_gen.hpp"
#include "dsaddle/invertibility.hpp"
#include "dsaddle/matrix_market.hpp"
#include "dsaddle/report.hpp"
#include "dsaddle/structured_inverse.hpp"

namespace py = pybind11;
using namespace dsaddle;

namespace {

py::object to_python(const Json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

Json from_python(const py::object& o) {
  return Json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

Matrix or_zero(const std::optional<Matrix>& x, Index rows) {
  return x ? *x : Matrix::Zero(rows, rows);
}

}  // namespace

PYBIND11_MODULE(_dsaddle, m) {
  m.doc() = "Invertibility tests and structured inverses for double saddle-point matrices";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DimensionError>(m, "DimensionError", error.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", error.ptr());
  py::register_exception<DataError>(m, "DataError", error.ptr());

  py::class_<ToleranceConfig>(m, "Tolerance")
      .def(py::init([](double rank_rtol, double sym_rtol, double psd_rtol, double residual_rtol) {
             ToleranceConfig t{rank_rtol, sym_rtol, psd_rtol, residual_rtol};
             t.validate();
             return t;
           }),
           py::kw_only(), py::arg("rank_rtol") = 1e-10, py::arg("sym_rtol") = 1e-10,
           py::arg("psd_rtol") = 1e-10, py::arg("residual_rtol") = 1e-8)
      .def_readonly("rank_rtol", &ToleranceConfig::rank_rtol)
      .def_readonly("sym_rtol", &ToleranceConfig::sym_rtol)
      .def_readonly("psd_rtol", &ToleranceConfig::psd_rtol)
      .def_readonly("residual_rtol", &ToleranceConfig::residual_rtol);

  py::class_<BlockSystem>(m, "BlockSystem")
      .def(py::init([](Matrix a, Matrix b, Matrix c, std::optional<Matrix> d,
                       std::optional<Matrix> e, const ToleranceConfig& tol) {
             const Index rows_d = b.rows();
             const Index rows_e = c.rows();
             return BlockSystem(std::move(a), std::move(b), std::move(c), or_zero(d, rows_d),
                                or_zero(e, rows_e), tol);
           }),
           py::arg("A"), py::arg("B"), py::arg("C"), py::arg("D") = py::none(),
           py::arg("E") = py::none(), py::arg("tol") = ToleranceConfig{},
           "Missing D or E means a zero block.")
      .def_property_readonly("A", &BlockSystem::A)
      .def_property_readonly("B", &BlockSystem::B)
      .def_property_readonly("C", &BlockSystem::C)
      .def_property_readonly("D", &BlockSystem::D)
      .def_property_readonly("E", &BlockSystem::E)
      .def_property_readonly("n", &BlockSystem::n)
      .def_property_readonly("m", &BlockSystem::m)
      .def_property_readonly("p", &BlockSystem::p)
      .def("assemble", [](const BlockSystem& s) { return assemble(s).K; })
      .def("__eq__", [](const BlockSystem& x, const BlockSystem& y) { return x == y; })
      .def("__repr__", [](const BlockSystem& s) {
        return "<BlockSystem n=" + std::to_string(s.n()) + " m=" + std::to_string(s.m()) +
               " p=" + std::to_string(s.p()) + ">";
      });

  const ToleranceConfig def{};

  m.def(
      "diagnose",
      [](const BlockSystem& s, const ToleranceConfig& tol, bool oracle) {
        return to_python(to_json(s, diagnose(s, tol, oracle)));
      },
      py::arg("sys"), py::arg("tol") = def, py::arg("oracle") = false,
      "Diagnosis report as a dict (same layout as the CLI's JSON output).");

  m.def(
      "conditions",
      [](const BlockSystem& s, const ToleranceConfig& tol) {
        py::dict out;
        for (const auto& c : evaluate_conditions(s, tol).entries) {
          out[py::str(std::string(to_string(c.id)))] = c.holds;
        }
        return out;
      },
      py::arg("sys"), py::arg("tol") = def);

  m.def("oracle_invertible", &oracle_invertible, py::arg("sys"), py::arg("tol") = def);
  m.def("witness_residual", &witness_residual, py::arg("sys"), py::arg("u"));

  m.def(
      "three_block_inverse",
      [](const BlockSystem& s, const ToleranceConfig& tol) {
        return three_block_inverse(s, tol).assembled();
      },
      py::arg("sys"), py::arg("tol") = def);
  m.def(
      "inverse_via_factorization",
      [](const BlockSystem& s, const ToleranceConfig& tol) {
        return inverse_via_factorization(s, tol).assembled();
      },
      py::arg("sys"), py::arg("tol") = def);
  m.def(
      "dense_inverse",
      [](const BlockSystem& s, const ToleranceConfig& tol) {
        return dense_inverse(s, tol).assembled();
      },
      py::arg("sys"), py::arg("tol") = def);
  m.def(
      "two_block_inverse",
      [](const Matrix& a, const Matrix& b, const Matrix& d, const ToleranceConfig& tol) {
        return two_block_inverse(a, b, d, tol).assembled();
      },
      py::arg("A"), py::arg("B"), py::arg("D"), py::arg("tol") = def);

  m.def("schur_tilde_S", &schur_tilde_S, py::arg("sys"), py::arg("alpha"),
        py::arg("tol") = def);

  m.def(
      "z22_nullity_bounds",
      [](const BlockSystem& s, const ToleranceConfig& tol) {
        return to_python(to_json(z22_nullity_bounds(s, dense_inverse(s, tol), tol)));
      },
      py::arg("sys"), py::arg("tol") = def);

  m.def(
      "generate",
      [](const py::dict& spec, const ToleranceConfig& tol) {
        const GeneratorSpec sp = generator_spec_from_json(from_python(spec));
        auto g = gen_instance(sp, tol);
        Json cert = to_json(g.certificate, sp.n, sp.m, sp.p);
        return py::make_tuple(std::move(g.system), to_python(cert));
      },
      py::arg("spec"), py::arg("tol") = def,
      "Random instance from a generator spec dict. Returns (system, certificate).");

  m.def(
      "load_block_system",
      [](const std::filesystem::path& dir, const ToleranceConfig& tol) {
        return load_block_system(dir, tol);
      },
      py::arg("directory"), py::arg("tol") = def);
  m.def("save_block_system", &save_block_system, py::arg("directory"), py::arg("sys"));
}
