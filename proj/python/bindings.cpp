#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "osg/config.hpp"
#include "osg/error.hpp"
#include "osg/grid_io.hpp"
#include "osg/kernel.hpp"
#include "osg/lithography.hpp"
#include "osg/oracle.hpp"

namespace py = pybind11;
using namespace osg;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

py::array_t<double> values_2d(const MomentumGrid& g) {
  py::array_t<double> out({g.n_p(), g.n_phi()});
  std::copy(g.values().begin(), g.values().end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cross-cavity optical Stern-Gerlach momentum distributions and lithography planning";

  static py::exception<Error> osg_error(m, "OsgError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = osg_error;
      py::object instance = err(e.what());
      instance.attr("kind") = to_string(e.kind());
      PyErr_SetObject(err.ptr(), instance.ptr());
    }
  });

  py::class_<SimParams>(m, "SimParams")
      .def(py::init([](double lambda, double k_dr, double eps_trunc, int n_max) {
             SimParams p{lambda, k_dr, eps_trunc, n_max};
             p.validate();
             return p;
           }),
           py::arg("lambda_") = 4.0, py::arg("k_dr") = SimParams{}.k_dr, py::arg("eps_trunc") = 1e-6,
           py::arg("n_max") = -1)
      .def_readwrite("lambda_", &SimParams::lambda)
      .def_readwrite("k_dr", &SimParams::k_dr)
      .def_readwrite("eps_trunc", &SimParams::eps_trunc)
      .def_readwrite("n_max", &SimParams::n_max)
      .def("__repr__", [](const SimParams& p) {
        return "SimParams(lambda_=" + std::to_string(p.lambda) + ", k_dr=" + std::to_string(p.k_dr) + ")";
      });

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init<int, int, double>(), py::arg("n_p") = 256, py::arg("n_phi") = 256, py::arg("p_max") = 0.0)
      .def_readwrite("n_p", &GridSpec::n_p)
      .def_readwrite("n_phi", &GridSpec::n_phi)
      .def_readwrite("p_max", &GridSpec::p_max);

  py::class_<AtomPrep>(m, "AtomPrep")
      .def(py::init<cplx, cplx>(), py::arg("c_g") = cplx{1.0, 0.0}, py::arg("c_e") = cplx{0.0, 0.0})
      .def_static("from_phase", &AtomPrep::from_phase, py::arg("kappa"))
      .def_static("ground", &AtomPrep::ground)
      .def_readwrite("c_g", &AtomPrep::c_g)
      .def_readwrite("c_e", &AtomPrep::c_e);

  py::class_<ModeCoeffs>(m, "ModeCoeffs")
      .def_property_readonly("amplitudes",
                             [](const ModeCoeffs& c) { return std::vector<cplx>(c.amplitudes().begin(), c.amplitudes().end()); })
      .def_property_readonly("n_max", &ModeCoeffs::n_max)
      .def_property_readonly("captured_weight", &ModeCoeffs::captured_weight)
      .def_property_readonly("mean_photon", [](const ModeCoeffs& c) { return mean_photon(c); })
      .def("__len__", &ModeCoeffs::size);

  m.def("fock", &fock_coeffs, py::arg("n"), py::arg("n_max"));
  m.def("coherent", &coherent_coeffs, py::arg("alpha"), py::arg("n_max"), py::arg("eps_trunc") = 1e-6);
  m.def("squeezed_coherent", &squeezed_coherent_coeffs, py::arg("alpha"), py::arg("r"), py::arg("phi_sq"),
        py::arg("n_max"), py::arg("eps_trunc") = 1e-6);
  m.def("coherent_window", &coherent_window, py::arg("alpha"), py::arg("eps"));
  m.def("squeezed_window", &squeezed_window, py::arg("alpha"), py::arg("r"), py::arg("phi_sq"), py::arg("eps"));
  m.def("squeezed_mean_photon", &squeezed_mean_photon, py::arg("alpha"), py::arg("r"), py::arg("phi_sq"));

  py::class_<TwoModeFockState>(m, "TwoModeFockState")
      .def_static("from_matrix", &TwoModeFockState::from_matrix, py::arg("rows"))
      .def("coefficient", &TwoModeFockState::coefficient, py::arg("m"), py::arg("n"))
      .def_property_readonly("n_total_max", &TwoModeFockState::n_total_max)
      .def_property_readonly("captured_weight", &TwoModeFockState::captured_weight);
  m.def("product_state", &product_state, py::arg("a"), py::arg("b"), py::arg("eps_trunc") = 1e-6);

  py::class_<MomentumGrid>(m, "MomentumGrid")
      .def_property_readonly("p", [](const MomentumGrid& g) { return to_array(g.p_axis()); })
      .def_property_readonly("phi", [](const MomentumGrid& g) { return to_array(g.phi_axis()); })
      .def_property_readonly("W", &values_2d)
      .def_property_readonly("params", [](const MomentumGrid& g) { return g.metadata.params; })
      .def_property_readonly("field", [](const MomentumGrid& g) { return g.metadata.field; })
      .def_property_readonly("n_total_max", [](const MomentumGrid& g) { return g.metadata.n_total_max; })
      .def_property_readonly("captured_weight", [](const MomentumGrid& g) { return g.metadata.captured_weight; })
      .def_property_readonly("integral", [](const MomentumGrid& g) { return g.metadata.integral; })
      .def_property_readonly("radial_marginal", [](const MomentumGrid& g) { return to_array(radial_marginal(g)); })
      .def_property_readonly("header", &grid_header);

  m.def(
      "momentum_distribution",
      [](const TwoModeFockState& field, const AtomPrep& atom, const SimParams& params, const GridSpec& grid,
         int threads, double term_budget) {
        KernelOptions o{threads, term_budget};
        py::gil_scoped_release release;
        return momentum_distribution(field, atom, params, grid, o);
      },
      py::arg("field"), py::arg("atom"), py::arg("params") = SimParams{}, py::arg("grid") = GridSpec{},
      py::arg("threads") = 1, py::arg("term_budget") = KernelOptions{}.term_budget);
  m.def("grid_integral", &grid_integral, py::arg("grid"));
  m.def("write_grid_bin", &write_grid_bin, py::arg("path"), py::arg("grid"));
  m.def("write_grid_csv", &write_grid_csv, py::arg("path"), py::arg("grid"));
  m.def("read_grid_bin", &read_grid_bin, py::arg("path"));
  m.def("read_grid_csv", &read_grid_csv, py::arg("path"));
  m.def(
      "simulate_config",
      [](const std::filesystem::path& path, int threads) {
        const auto c = load_config(path);
        const auto state = build_field(c.field, c.params, c.base_dir);
        const auto atom = c.atom ? c.atom->resolve() : AtomPrep::ground();
        KernelOptions o{threads > 0 ? threads : c.threads, c.term_budget};
        py::gil_scoped_release release;
        return momentum_distribution(state, atom, c.params, c.grid, o);
      },
      py::arg("path"), py::arg("threads") = 0);

  py::class_<LithTarget>(m, "LithTarget")
      .def(py::init<double, double>(), py::arg("p"), py::arg("phi"))
      .def_readwrite("p", &LithTarget::p)
      .def_readwrite("phi", &LithTarget::phi);
  py::class_<FieldPlan>(m, "FieldPlan")
      .def_readonly("abs_alpha", &FieldPlan::abs_alpha)
      .def_readonly("abs_beta", &FieldPlan::abs_beta)
      .def_readwrite("sign_a", &FieldPlan::sign_a)
      .def_readwrite("sign_b", &FieldPlan::sign_b)
      .def_readonly("r_a", &FieldPlan::r_a)
      .def_readonly("r_b", &FieldPlan::r_b)
      .def_readonly("mean_a", &FieldPlan::mean_a)
      .def_readonly("mean_b", &FieldPlan::mean_b)
      .def_property_readonly("alpha", &FieldPlan::alpha)
      .def_property_readonly("beta", &FieldPlan::beta);
  py::class_<Peak>(m, "Peak")
      .def_readonly("p", &Peak::p)
      .def_readonly("phi", &Peak::phi)
      .def_readonly("value", &Peak::value)
      .def_readonly("i", &Peak::i)
      .def_readonly("j", &Peak::j);
  py::class_<PeakWidth>(m, "PeakWidth")
      .def_readonly("radial", &PeakWidth::radial)
      .def_readonly("azimuthal", &PeakWidth::azimuthal);
  py::class_<ScreenGeometry>(m, "ScreenGeometry")
      .def(py::init<double, double, double, double>(), py::arg("length"), py::arg("velocity"), py::arg("mass"),
           py::arg("wavenumber"));

  m.def("predict_deflection", &predict_deflection, py::arg("mean_a"), py::arg("mean_b"), py::arg("sign_a") = 1,
        py::arg("sign_b") = 1, py::arg("lambda_") = 4.0);
  m.def("plan_fields", &plan_fields, py::arg("target"), py::arg("lambda_") = 4.0, py::arg("r_a") = 0.0,
        py::arg("r_b") = 0.0);
  m.def("plan_state", &plan_state, py::arg("plan"), py::arg("eps_trunc") = 1e-6);
  m.def("locate_peak", &locate_peak, py::arg("grid"), py::arg("p_min") = std::nullopt);
  m.def("peak_width", &peak_width, py::arg("grid"), py::arg("peak"));
  m.def("screen_map", &screen_map, py::arg("p"), py::arg("geometry"));

  py::class_<oracle::SuiteResult>(m, "SuiteResult")
      .def_readonly("name", &oracle::SuiteResult::name)
      .def_readonly("samples", &oracle::SuiteResult::samples)
      .def_readonly("max_error", &oracle::SuiteResult::max_error)
      .def_readonly("mean_error", &oracle::SuiteResult::mean_error)
      .def_readonly("tolerance", &oracle::SuiteResult::tolerance)
      .def_readonly("passed", &oracle::SuiteResult::pass)
      .def_readonly("detail", &oracle::SuiteResult::detail);
  m.def(
      "quadrature_suite",
      [](const SimParams& params, int n_max, int points, unsigned seed) {
        return oracle::quadrature_suite(params, n_max, points, seed);
      },
      py::arg("params") = SimParams{}, py::arg("n_max") = 5, py::arg("points") = 20, py::arg("seed") = 1);
  m.def("orthogonality_suite", &oracle::orthogonality_suite, py::arg("n_max") = 30, py::arg("angles") = 20,
        py::arg("seed") = 3);

  m.attr("__version__") = tool_version();
}
