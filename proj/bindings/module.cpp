#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zeroscope/detect.hpp"
#include "zeroscope/gaf.hpp"
#include "zeroscope/hermite.hpp"
#include "zeroscope/io.hpp"
#include "zeroscope/ppstats.hpp"
#include "zeroscope/signal.hpp"
#include "zeroscope/stft.hpp"
#include "zeroscope/theory.hpp"

namespace py = pybind11;
using namespace zeroscope;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spectrogram zero patterns: simulation, statistics and detection tests";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::enum_<SignalKind>(m, "SignalKind")
      .value("Real", SignalKind::Real)
      .value("Complex", SignalKind::Complex);
  py::enum_<PointProcess>(m, "PointProcess")
      .value("Gaf", PointProcess::Gaf)
      .value("Ginibre", PointProcess::Ginibre)
      .value("Poisson", PointProcess::Poisson);
  py::enum_<GafKind>(m, "GafKind")
      .value("Symmetric", GafKind::Symmetric)
      .value("Planar", GafKind::Planar);
  py::enum_<Statistic>(m, "Statistic")
      .value("L", Statistic::L)
      .value("F", Statistic::F);
  py::enum_<Norm>(m, "Norm").value("Sup", Norm::Sup).value("Two", Norm::Two);
  py::enum_<NullCurve>(m, "NullCurve")
      .value("Theoretical", NullCurve::Theoretical)
      .value("PointwiseAverage", NullCurve::PointwiseAverage);

  py::class_<Signal>(m, "Signal")
      .def(py::init<>())
      .def_readwrite("fs", &Signal::fs)
      .def_readwrite("kind", &Signal::kind)
      .def_readwrite("samples", &Signal::samples)
      .def("__len__", &Signal::size);

  py::class_<ChirpSpec>(m, "ChirpSpec")
      .def(py::init<>())
      .def_readwrite("f0", &ChirpSpec::f0)
      .def_readwrite("f1", &ChirpSpec::f1)
      .def_readwrite("t_start", &ChirpSpec::t_start)
      .def_readwrite("t_end", &ChirpSpec::t_end)
      .def_readwrite("taper_fraction", &ChirpSpec::taper_fraction);

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init<>())
      .def_static("from_a", &GridSpec::from_a, py::arg("N"), py::arg("K"), py::arg("a"))
      .def_static("from_fs", &GridSpec::from_fs, py::arg("N"), py::arg("K"),
                  py::arg("fs"))
      .def_readwrite("N", &GridSpec::N)
      .def_readwrite("K", &GridSpec::K)
      .def_readwrite("a", &GridSpec::a)
      .def_readwrite("fs", &GridSpec::fs)
      .def("dt", &GridSpec::dt)
      .def("dnu", &GridSpec::dnu)
      .def("crop_n0", &GridSpec::crop_n0)
      .def("crop_n1", &GridSpec::crop_n1)
      .def("crop_k0", &GridSpec::crop_k0)
      .def("crop_k1", &GridSpec::crop_k1);

  py::class_<TFPoint>(m, "TFPoint")
      .def_readwrite("u", &TFPoint::u)
      .def_readwrite("v", &TFPoint::v);

  py::class_<Spectrogram>(m, "Spectrogram")
      .def_readwrite("grid", &Spectrogram::grid)
      .def_readwrite("values", &Spectrogram::values)
      .def("at", &Spectrogram::at, py::arg("n"), py::arg("k"));

  py::class_<Window>(m, "Window")
      .def(py::init<>())
      .def(py::init([](double u0, double u1, double v0, double v1) {
             return Window{u0, u1, v0, v1};
           }),
           py::arg("u0"), py::arg("u1"), py::arg("v0"), py::arg("v1"))
      .def_readwrite("u0", &Window::u0)
      .def_readwrite("u1", &Window::u1)
      .def_readwrite("v0", &Window::v0)
      .def_readwrite("v1", &Window::v1)
      .def("width", &Window::width)
      .def("height", &Window::height)
      .def("area", &Window::area)
      .def("shorter_side", &Window::shorter_side)
      .def("contains", &Window::contains, py::arg("u"), py::arg("v"));

  py::class_<PointPattern>(m, "PointPattern")
      .def(py::init<>())
      .def_readwrite("window", &PointPattern::window)
      .def_readwrite("u", &PointPattern::u)
      .def_readwrite("v", &PointPattern::v)
      .def("__len__", &PointPattern::size);

  py::class_<FunctionalCurve>(m, "FunctionalCurve")
      .def(py::init<>())
      .def_readwrite("statistic", &FunctionalCurve::statistic)
      .def_readwrite("correction", &FunctionalCurve::correction)
      .def_readwrite("r", &FunctionalCurve::r)
      .def_readwrite("value", &FunctionalCurve::value)
      .def_readwrite("n_points", &FunctionalCurve::n_points)
      .def_readwrite("truncated", &FunctionalCurve::truncated);

  py::class_<TheoryCurve>(m, "TheoryCurve")
      .def_readwrite("kind", &TheoryCurve::kind)
      .def_readwrite("r", &TheoryCurve::r)
      .def_readwrite("value", &TheoryCurve::value);

  py::class_<GafSample>(m, "GafSample")
      .def_readwrite("kind", &GafSample::kind)
      .def_readwrite("R", &GafSample::R)
      .def_readwrite("coeffs", &GafSample::coeffs);

  py::class_<Region>(m, "Region")
      .def_static("disk", &Region::disk, py::arg("cx"), py::arg("cy"), py::arg("radius"))
      .def_static("rectangle", &Region::rectangle, py::arg("w"))
      .def("contains", &Region::contains, py::arg("u"), py::arg("v"))
      .def("bounds", &Region::bounds);

  py::class_<TestConfig>(m, "TestConfig")
      .def(py::init<>())
      .def_readwrite("statistic", &TestConfig::statistic)
      .def_readwrite("norm", &TestConfig::norm)
      .def_readwrite("r_min", &TestConfig::r_min)
      .def_readwrite("r_max", &TestConfig::r_max)
      .def_readwrite("m", &TestConfig::m)
      .def_readwrite("k", &TestConfig::k)
      .def_readwrite("null_curve", &TestConfig::null_curve)
      .def_readwrite("grid", &TestConfig::grid)
      .def_readwrite("seed", &TestConfig::seed);

  py::class_<EnvelopeTestResult>(m, "EnvelopeTestResult")
      .def_readwrite("alpha", &EnvelopeTestResult::alpha)
      .def_readwrite("t_exp", &EnvelopeTestResult::t_exp)
      .def_readwrite("t_sorted", &EnvelopeTestResult::t_sorted)
      .def_readwrite("rank", &EnvelopeTestResult::rank)
      .def_readwrite("reject", &EnvelopeTestResult::reject);

  py::class_<EnvelopeRow>(m, "EnvelopeRow")
      .def_readwrite("r_max", &EnvelopeRow::r_max)
      .def_readwrite("t_exp", &EnvelopeRow::t_exp)
      .def_readwrite("t_k", &EnvelopeRow::t_k);

  py::class_<PowerEstimate>(m, "PowerEstimate")
      .def_readwrite("snr", &PowerEstimate::snr)
      .def_readwrite("r_max", &PowerEstimate::r_max)
      .def_readwrite("rejections", &PowerEstimate::rejections)
      .def_readwrite("reps", &PowerEstimate::reps)
      .def_readwrite("beta_hat", &PowerEstimate::beta_hat)
      .def_readwrite("ci_lo", &PowerEstimate::ci_lo)
      .def_readwrite("ci_hi", &PowerEstimate::ci_hi)
      .def_readwrite("bonferroni_m", &PowerEstimate::bonferroni_m);

  m.def("white_noise", &white_noise, py::arg("n"), py::arg("fs"), py::arg("seed"),
        py::arg("kind") = SignalKind::Real);
  m.def("linear_chirp", &linear_chirp, py::arg("spec"), py::arg("n"), py::arg("fs"));
  m.def("mix_snr", &mix_snr, py::arg("signal"), py::arg("noise"), py::arg("snr"));
  m.def("support_power", &support_power, py::arg("signal"));

  m.def("hermite_eval", py::overload_cast<int, double>(&hermite_eval), py::arg("k"),
        py::arg("x"));
  m.def("hermite_eval",
        py::overload_cast<int, const std::vector<double>&>(&hermite_eval), py::arg("k"),
        py::arg("x"));
  m.def("bargmann_hermite", &bargmann_hermite, py::arg("k"), py::arg("z"));
  m.def("hermite_stft_closed_form", &hermite_stft_closed_form, py::arg("k"),
        py::arg("u"), py::arg("v"));

  m.def("spectrogram", &spectrogram, py::arg("signal"), py::arg("grid"),
        py::arg("threads") = 0);
  m.def("extract_zeros", &extract_zeros, py::arg("spectrogram"));
  m.def("extract_zeros_full", &extract_zeros_full, py::arg("spectrogram"));
  m.def("sampled_hermite", &sampled_hermite, py::arg("k"), py::arg("grid"));
  m.def("sample_to_tf", &sample_to_tf, py::arg("n"), py::arg("k"), py::arg("grid"));
  m.def("crop_window", &crop_window, py::arg("grid"));

  m.def("default_r_grid", &default_r_grid, py::arg("window"), py::arg("steps") = 512);
  m.def("restrict_pattern", &restrict_pattern, py::arg("pattern"), py::arg("sub"));
  m.def("estimate_K", &estimate_K, py::arg("pattern"), py::arg("r"));
  m.def("estimate_L", &estimate_L, py::arg("pattern"), py::arg("r"));
  m.def("estimate_F", &estimate_F, py::arg("pattern"), py::arg("r"),
        py::arg("ref_grid_spacing") = 0.05);
  m.def("estimate_G", &estimate_G, py::arg("pattern"), py::arg("r"));
  m.def("estimate_pcf", &estimate_pcf, py::arg("pattern"), py::arg("r"),
        py::arg("bandwidth") = py::none());

  m.def("g0_planar_gaf", &g0_planar_gaf, py::arg("r"));
  m.def("g0_ginibre", &g0_ginibre, py::arg("r"));
  m.def("g0_poisson", &g0_poisson, py::arg("r"));
  m.def("K0_L0", &K0_L0, py::arg("process"), py::arg("r"));
  m.def("horizontal_density_S", &horizontal_density_S, py::arg("y"));
  m.def("real_axis_zero_rate", &real_axis_zero_rate);
  m.def("hole_constant", &hole_constant);

  m.def("gaf_truncation_degree", &gaf_truncation_degree, py::arg("R"));
  m.def("sample_gaf", &sample_gaf, py::arg("kind"), py::arg("R"), py::arg("seed"));
  m.def("eval_scaled", &eval_scaled, py::arg("gaf"), py::arg("z"));
  m.def("eval_series", &eval_series, py::arg("gaf"), py::arg("z"));
  m.def("find_zeros", &find_zeros, py::arg("gaf"), py::arg("region"),
        py::arg("spacing") = 0.05);
  m.def("winding_count", &winding_count, py::arg("gaf"), py::arg("region"));
  m.def("real_zeros", &real_zeros, py::arg("gaf"), py::arg("x0"), py::arg("x1"));

  m.def("test_statistic", &test_statistic, py::arg("s_hat"), py::arg("s_ref"),
        py::arg("norm"), py::arg("r_min"), py::arg("r_max"));
  m.def("envelope_test", &envelope_test, py::arg("data"), py::arg("cfg"),
        py::arg("threads") = 0);
  m.def("envelope_curves", &envelope_curves, py::arg("data"), py::arg("cfg"),
        py::arg("r_max_grid"), py::arg("threads") = 0);
  m.def("estimate_power", &estimate_power, py::arg("signal"), py::arg("cfg"),
        py::arg("snr"), py::arg("reps"), py::arg("confidence"), py::arg("n_rmax_tests"),
        py::arg("fresh_null") = true, py::arg("threads") = 0);
  m.def("clopper_pearson", &clopper_pearson, py::arg("successes"), py::arg("trials"),
        py::arg("confidence"));

  m.def("write_signal_csv", &write_signal_csv, py::arg("path"), py::arg("signal"));
  m.def("read_signal_csv", &read_signal_csv, py::arg("path"));
  m.def("write_spectrogram", &write_spectrogram, py::arg("path"),
        py::arg("spectrogram"));
  m.def("read_spectrogram", &read_spectrogram, py::arg("path"));
  m.def("write_pattern_csv", &write_pattern_csv, py::arg("path"), py::arg("pattern"));
  m.def("read_pattern_csv", &read_pattern_csv, py::arg("path"));
  m.def("write_curve_csv", &write_curve_csv, py::arg("path"), py::arg("curve"));
  m.def("read_curve_csv", &read_curve_csv, py::arg("path"));
  m.def("write_theory_csv", &write_theory_csv, py::arg("path"), py::arg("curve"));
  m.def("write_test_json", &write_test_json, py::arg("path"), py::arg("result"),
        py::arg("cfg"));
}
