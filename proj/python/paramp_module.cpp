#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "paramp/detection.hpp"
#include "paramp/modes.hpp"
#include "paramp/params.hpp"
#include "paramp/propagation.hpp"
#include "paramp/transfer.hpp"

namespace py = pybind11;
using namespace paramp;

namespace {

template <typename T>
py::array_t<T> to_array(const Field<T>& f) {
  const auto n = static_cast<py::ssize_t>(f.grid().n());
  py::array_t<T> out({n, n});
  auto buf = out.template mutable_unchecked<2>();
  for (py::ssize_t iy = 0; iy < n; ++iy) {
    for (py::ssize_t ix = 0; ix < n; ++ix) {
      buf(iy, ix) = f.at(static_cast<std::size_t>(ix), static_cast<std::size_t>(iy));
    }
  }
  return out;
}

template <typename T>
Field<T> from_array(const py::array_t<T, py::array::c_style | py::array::forcecast>& a,
                    double extent) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1)) {
    throw py::value_error("expected a square 2-D array");
  }
  const TransverseGrid grid(static_cast<std::size_t>(a.shape(0)), extent);
  std::vector<T> values(a.data(), a.data() + a.size());
  return Field<T>(grid, std::move(values));
}

}  // namespace

PYBIND11_MODULE(_paramp, m) {
  m.doc() = "Parametric image amplification in planar and confocal optical cavities";

  static py::exception<Error> error(m, "ParampError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, (e.qualified_code() + ": " + e.what()).c_str());
    }
  });

  m.attr("SPEED_OF_LIGHT") = kSpeedOfLight;

  py::enum_<Geometry>(m, "Geometry")
      .value("PLANAR", Geometry::Planar)
      .value("CONFOCAL", Geometry::Confocal);

  py::class_<CavityParams>(m, "CavityParams")
      .def(py::init<double, double, double, Geometry>(), py::arg("gamma"), py::arg("detuning"),
           py::arg("pump"), py::arg("geometry"))
      .def_property_readonly("gamma", &CavityParams::gamma)
      .def_property_readonly("detuning", &CavityParams::detuning)
      .def_property_readonly("pump", &CavityParams::pump)
      .def_property_readonly("geometry", &CavityParams::geometry);

  py::class_<PupilSpec>(m, "PupilSpec")
      .def_static("infinite", &PupilSpec::infinite)
      .def_static("square", &PupilSpec::square, py::arg("side"))
      .def_static("circular", &PupilSpec::circular, py::arg("radius"))
      .def_property_readonly("area", &PupilSpec::area);

  py::class_<OpticalTrain>(m, "OpticalTrain")
      .def_property_readonly("wavelength", &OpticalTrain::wavelength)
      .def_property_readonly("focal", &OpticalTrain::focal)
      .def_property_readonly("wavenumber", &OpticalTrain::wavenumber)
      .def_property_readonly("rho0", &OpticalTrain::rho0);

  py::class_<DetectorParams>(m, "DetectorParams")
      .def(py::init<double, double, double>(), py::arg("eta"), py::arg("pixel_area"),
           py::arg("window"))
      .def_property_readonly("eta", &DetectorParams::eta)
      .def_property_readonly("pixel_area", &DetectorParams::pixel_area)
      .def_property_readonly("window", &DetectorParams::window);

  m.def("derive_scales", &derive_scales, py::arg("cavity"), py::arg("wavelength"),
        py::arg("focal"), py::arg("pupil") = PupilSpec::infinite());

  m.def(
      "validity_figure",
      [](double s_peak_sq, const OpticalTrain& train, const CavityParams& cavity,
         double threshold) {
        const auto v = validity_figure(s_peak_sq, train, cavity, threshold);
        py::dict d;
        d["value"] = v.value;
        d["pupil_defined"] = v.pupil_defined;
        d["verdict"] = std::string(to_string(v.verdict()));
        return d;
      },
      py::arg("s_peak_sq"), py::arg("train"), py::arg("cavity"),
      py::arg("threshold") = kDefaultValidityThreshold);

  m.def(
      "mismatch",
      [](const CavityParams& c, const OpticalTrain& t, double rho, double omega) {
        return mismatch(c, t, rho, omega).value;
      },
      py::arg("cavity"), py::arg("train"), py::arg("rho"), py::arg("omega") = 0.0);

  py::class_<TransferPair>(m, "TransferPair")
      .def_readonly("u", &TransferPair::u)
      .def_readonly("v", &TransferPair::v)
      .def_readonly("denominator", &TransferPair::denominator);

  py::class_<SqueezeParams>(m, "SqueezeParams")
      .def_readonly("r", &SqueezeParams::r)
      .def_readonly("theta", &SqueezeParams::theta);

  m.def("transfer_pair",
        py::overload_cast<double, double, double, double>(&transfer_pair),
        py::arg("delta_plus"), py::arg("delta_minus"), py::arg("pump"),
        py::arg("guard") = kDefaultSingularityGuard);
  m.def("gain", &gain, py::arg("pair"));
  m.def("squeeze", &squeeze, py::arg("pair"));
  m.def("noise_figure", &noise_figure, py::arg("gain"), py::arg("squeeze"), py::arg("eta"));

  m.def(
      "gain_map",
      [](const CavityParams& c, const OpticalTrain& t, std::size_t n, double extent) {
        return to_array(gain_map(c, t, TransverseGrid(n, extent)));
      },
      py::arg("cavity"), py::arg("train"), py::arg("n"), py::arg("extent"));
  m.def(
      "noise_figure_map",
      [](const CavityParams& c, const OpticalTrain& t, std::size_t n, double extent, double eta) {
        return to_array(noise_figure_map(c, t, TransverseGrid(n, extent), eta));
      },
      py::arg("cavity"), py::arg("train"), py::arg("n"), py::arg("extent"), py::arg("eta"));

  m.def(
      "amplify",
      [](const py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>& obj,
         double extent, const CavityParams& c, const OpticalTrain& t) {
        const auto r = amplify(from_array(obj, extent), c, t);
        return py::make_tuple(to_array(r.image), r.warnings);
      },
      py::arg("object"), py::arg("extent"), py::arg("cavity"), py::arg("train"),
      "Image field e(rho) at Omega = 0 and any warnings; arrays are indexed [y, x].");

  m.def(
      "even_projection",
      [](const py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>& f,
         double extent) { return to_array(even_projection(from_array(f, extent))); },
      py::arg("field"), py::arg("extent"));

  m.def(
      "mode_function",
      [](int p, int l, bool sine, double waist, std::size_t n, double extent) {
        const ModeIndex idx{p, l, sine ? Azimuth::Sine : Azimuth::Cosine};
        return to_array(real_part(mode_function(idx, waist, TransverseGrid(n, extent))));
      },
      py::arg("p"), py::arg("l"), py::arg("sine") = false, py::arg("waist"), py::arg("n"),
      py::arg("extent"));

  m.def(
      "gram_max_deviation",
      [](double waist, int pmax, int lmax, std::size_t n, double extent) {
        return gram_diagnostics(ModeBasis(waist, pmax, lmax, TransverseGrid(n, extent)))
            .max_deviation;
      },
      py::arg("waist"), py::arg("pmax"), py::arg("lmax"), py::arg("n"), py::arg("extent"));

  m.def(
      "monte_carlo_image",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& mean,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& variance,
         double extent, std::uint64_t seed, std::size_t shots) {
        const auto r =
            monte_carlo_image(from_array(mean, extent), from_array(variance, extent), seed, shots);
        py::dict d;
        d["last_sample"] = to_array(r.last_sample);
        d["mean"] = to_array(r.mean);
        d["variance"] = to_array(r.variance);
        d["mean_stderr"] = to_array(r.mean_stderr);
        d["variance_stderr"] = to_array(r.variance_stderr);
        d["warnings"] = r.warnings;
        return d;
      },
      py::arg("mean"), py::arg("variance"), py::arg("extent"), py::arg("seed"), py::arg("shots"));
}
