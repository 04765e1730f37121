#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "combnoise/calibration.hpp"
#include "combnoise/cavity.hpp"
#include "combnoise/comb_model.hpp"
#include "combnoise/constants.hpp"
#include "combnoise/covariance.hpp"
#include "combnoise/errors.hpp"
#include "combnoise/noise_sim.hpp"
#include "combnoise/version.hpp"

namespace py = pybind11;
using namespace combnoise;

PYBIND11_MODULE(_core, m) {
    m.doc() = "frequency comb noise correlation toolkit";
    m.attr("__version__") = version_string;
    m.attr("PLANCK_J_S") = constants::planck_j_s;
    m.attr("SPEED_OF_LIGHT_M_S") = constants::speed_of_light_m_s;

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ProtocolError>(m, "ProtocolError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::enum_<Quadrature>(m, "Quadrature")
        .value("AMPLITUDE", Quadrature::Amplitude)
        .value("PHASE", Quadrature::Phase);
    py::enum_<ModeLabel>(m, "ModeLabel")
        .value("CEO", ModeLabel::Ceo)
        .value("REP", ModeLabel::Rep)
        .value("EIGEN", ModeLabel::Eigen)
        .value("CUSTOM", ModeLabel::Custom);
    py::enum_<PsdUnits>(m, "PsdUnits")
        .value("REL_SHOT_LINEAR", PsdUnits::RelShotLinear)
        .value("REL_SHOT_DB", PsdUnits::RelShotDb)
        .value("DBC_PER_HZ", PsdUnits::DbcPerHz);
    py::enum_<TraceLabel>(m, "TraceLabel")
        .value("CEO", TraceLabel::Ceo)
        .value("REP", TraceLabel::Rep)
        .value("CUSTOM", TraceLabel::Custom);
    py::enum_<QualityFlag>(m, "QualityFlag")
        .value("OK", QualityFlag::Ok)
        .value("HIGH_CORRECTION", QualityFlag::HighCorrection);

    py::class_<FrequencyGrid>(m, "FrequencyGrid")
        .def(py::init<>())
        .def_readwrite("omega0_rad_s", &FrequencyGrid::omega0_rad_s)
        .def_readwrite("offsets_rad_s", &FrequencyGrid::offsets_rad_s)
        .def("__len__", &FrequencyGrid::size)
        .def("omega_at", &FrequencyGrid::omega_at)
        .def("wavelength_at", &FrequencyGrid::wavelength_at)
        .def("center_wavelength_m", &FrequencyGrid::center_wavelength_m)
        .def("validate", &FrequencyGrid::validate);
    m.def("wavelength_uniform_grid", &wavelength_uniform_grid, py::arg("center_m"),
          py::arg("span_m"), py::arg("n_points"));

    py::class_<SpectralEnvelope>(m, "SpectralEnvelope")
        .def(py::init<>())
        .def_readwrite("grid", &SpectralEnvelope::grid)
        .def_readwrite("amplitude", &SpectralEnvelope::amplitude)
        .def("__len__", &SpectralEnvelope::size)
        .def("total_power", &SpectralEnvelope::total_power)
        .def("validate", &SpectralEnvelope::validate);
    m.def("gaussian_envelope", &gaussian_envelope, py::arg("center_m"), py::arg("fwhm_m"),
          py::arg("grid"));

    py::class_<SpectralPartition>(m, "SpectralPartition")
        .def(py::init<>())
        .def_readwrite("zone_bounds", &SpectralPartition::zone_bounds)
        .def_readwrite("powers", &SpectralPartition::powers)
        .def("n_zones", &SpectralPartition::n_zones)
        .def("total_power", &SpectralPartition::total_power)
        .def("validate", &SpectralPartition::validate);
    m.def("partition", &partition, py::arg("envelope"), py::arg("n_zones"));

    py::class_<ModeVector>(m, "ModeVector")
        .def(py::init<>())
        .def_readwrite("components", &ModeVector::components)
        .def_readwrite("label", &ModeVector::label)
        .def_readwrite("eigen_index", &ModeVector::eigen_index)
        .def("__len__", &ModeVector::size)
        .def("validate", &ModeVector::validate);
    m.def("dot", &dot, py::arg("a"), py::arg("b"));

    py::class_<TimingModes>(m, "TimingModes")
        .def_readonly("ceo_raw", &TimingModes::ceo_raw)
        .def_readonly("rep_raw", &TimingModes::rep_raw);
    m.def("timing_modes", &timing_modes, py::arg("envelope"));
    m.def("discretize_mode", &discretize_mode, py::arg("raw"), py::arg("envelope"),
          py::arg("bands"), py::arg("label") = ModeLabel::Custom);

    py::class_<CavityParams>(m, "CavityParams")
        .def_readonly("r1", &CavityParams::r1)
        .def_readonly("r2", &CavityParams::r2)
        .def_readonly("t1", &CavityParams::t1)
        .def_readonly("t2", &CavityParams::t2)
        .def_readonly("f_rep_hz", &CavityParams::f_rep_hz)
        .def_readonly("t_max", &CavityParams::t_max)
        .def_readonly("f_coeff", &CavityParams::f_coeff)
        .def_readonly("finesse", &CavityParams::finesse)
        .def_readonly("f_c_hz", &CavityParams::f_c_hz)
        .def_static("from_mirrors", &CavityParams::from_mirrors, py::arg("r1"), py::arg("r2"),
                    py::arg("t1"), py::arg("t2"), py::arg("f_rep_hz"))
        .def_static("from_finesse",
                    py::overload_cast<double, double>(&CavityParams::from_finesse),
                    py::arg("finesse"), py::arg("f_rep_hz"))
        .def_static("from_finesse",
                    py::overload_cast<double, double, double>(&CavityParams::from_finesse),
                    py::arg("finesse"), py::arg("f_rep_hz"), py::arg("t_max"));

    py::class_<FlaggedComplex>(m, "FlaggedComplex")
        .def_readonly("value", &FlaggedComplex::value)
        .def_readonly("outside_validity", &FlaggedComplex::outside_validity);
    py::class_<QuadraturePair>(m, "QuadraturePair")
        .def(py::init<>())
        .def(py::init([](double x, double p) {
                 QuadraturePair q;
                 q.x = x;
                 q.p = p;
                 return q;
             }),
             py::arg("x"), py::arg("p"))
        .def_readwrite("x", &QuadraturePair::x)
        .def_readwrite("p", &QuadraturePair::p);

    m.def("f_3db_hz", &f_3db_hz, py::arg("cavity"));
    m.def("transmission_exact", &transmission_exact, py::arg("cavity"), py::arg("f_hz"));
    m.def("transmission_lowfreq", &transmission_lowfreq, py::arg("cavity"), py::arg("f_hz"));
    m.def("transmission_highfinesse", &transmission_highfinesse, py::arg("cavity"),
          py::arg("f_hz"));
    m.def("phase_transfer", &phase_transfer, py::arg("cavity"), py::arg("f_hz"));
    m.def("decoupling_factor", &decoupling_factor, py::arg("cavity"), py::arg("f_hz"));
    m.def("interconvert_quadratures", &interconvert_quadratures, py::arg("quadratures"),
          py::arg("t"));

    m.def("flat_psd", &flat_psd, py::arg("level"));
    m.def("power_law_psd", &power_law_psd, py::arg("level"), py::arg("ref_hz"),
          py::arg("exponent"));
    m.def("lorentzian_psd", &lorentzian_psd, py::arg("level"), py::arg("knee_hz"));

    py::class_<NoiseModeSpec>(m, "NoiseModeSpec")
        .def(py::init<>())
        .def_readwrite("quadrature", &NoiseModeSpec::quadrature)
        .def_readwrite("mode", &NoiseModeSpec::mode)
        .def_readwrite("psd", &NoiseModeSpec::psd);

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("zone_powers", &SimConfig::zone_powers)
        .def_readwrite("modes", &SimConfig::modes)
        .def_readwrite("rf_frequencies_hz", &SimConfig::rf_frequencies_hz)
        .def_readwrite("n_samples", &SimConfig::n_samples)
        .def_readwrite("seed", &SimConfig::seed)
        .def_readwrite("cavity", &SimConfig::cavity)
        .def_readwrite("amp_phase_coupling", &SimConfig::amp_phase_coupling)
        .def("n_zones", &SimConfig::n_zones)
        .def("validate", &SimConfig::validate);

    m.def("classical_phase_scale", &classical_phase_scale, py::arg("config"), py::arg("quad"),
          py::arg("f_hz"));

    py::class_<SampleMatrix>(m, "SampleMatrix")
        .def_readonly("n_samples", &SampleMatrix::n_samples)
        .def_readonly("n_zones", &SampleMatrix::n_zones)
        .def("array", [](const SampleMatrix& s) {
            return py::array_t<double>({s.n_samples, s.n_zones}, s.data.data());
        });

    m.def("sample_quadratures", &sample_quadratures, py::arg("config"), py::arg("quad"),
          py::arg("f_hz"), py::arg("stream_tag") = 0);

    py::class_<MeasuredVariance>(m, "MeasuredVariance")
        .def(py::init<>())
        .def_readwrite("zones", &MeasuredVariance::zones)
        .def_readwrite("quadrature", &MeasuredVariance::quadrature)
        .def_readwrite("rf_hz", &MeasuredVariance::rf_hz)
        .def_readwrite("power", &MeasuredVariance::power)
        .def_readwrite("value", &MeasuredVariance::value);

    m.def("measure_variance", &measure_variance, py::arg("config"), py::arg("zones"),
          py::arg("quad"), py::arg("f_hz"), py::arg("stream_tag"));
    m.def("measure_variance_from_samples", &measure_variance_from_samples, py::arg("samples"),
          py::arg("zone_powers"), py::arg("zones"), py::arg("quad"), py::arg("f_hz"));
    // sequential on purpose: a Python psd callback must stay on this thread
    m.def(
        "run_protocol",
        [](const SimConfig& c, Quadrature q, double f) { return run_protocol(c, q, f, 1); },
        py::arg("config"), py::arg("quad"), py::arg("f_hz"));
    m.def("run_protocol_shared", &run_protocol_shared, py::arg("config"), py::arg("quad"),
          py::arg("f_hz"));

    py::class_<NoiseMatrix>(m, "NoiseMatrix")
        .def_readonly("quadrature", &NoiseMatrix::quadrature)
        .def_readonly("rf_hz", &NoiseMatrix::rf_hz)
        .def_readonly("n", &NoiseMatrix::n)
        .def("at", &NoiseMatrix::at, py::arg("i"), py::arg("j"))
        .def("array",
             [](const NoiseMatrix& mat) {
                 return py::array_t<double>({mat.n, mat.n}, mat.entries.data());
             })
        .def_static("make", &NoiseMatrix::make, py::arg("quad"), py::arg("rf_hz"), py::arg("n"),
                    py::arg("entries"));

    m.def("covariance_pair", &covariance_pair, py::arg("vi"), py::arg("vj"), py::arg("vij"));
    m.def("assemble", &assemble, py::arg("measurements"));

    py::class_<EigenDecomposition>(m, "EigenDecomposition")
        .def_readonly("eigenvalues", &EigenDecomposition::eigenvalues)
        .def_readonly("eigenvectors", &EigenDecomposition::eigenvectors)
        .def_readonly("n", &EigenDecomposition::n);
    py::class_<EigenResiduals>(m, "EigenResiduals")
        .def_readonly("eigen_residual", &EigenResiduals::eigen_residual)
        .def_readonly("orthonormality", &EigenResiduals::orthonormality)
        .def_readonly("reconstruction", &EigenResiduals::reconstruction);

    m.def("eig_sym", &eig_sym, py::arg("matrix"));
    m.def("eigen_residuals", &eigen_residuals, py::arg("matrix"), py::arg("eig"));
    m.def("project_variance", &project_variance, py::arg("eig"), py::arg("w"));
    m.def("excess_fraction", &excess_fraction, py::arg("eig"), py::arg("k"));
    m.def("extract_collective", &extract_collective, py::arg("matrix"), py::arg("w_ceo"),
          py::arg("w_rep"));

    py::class_<PsdPoint>(m, "PsdPoint")
        .def(py::init<>())
        .def_readwrite("f_hz", &PsdPoint::f_hz)
        .def_readwrite("value", &PsdPoint::value)
        .def_readwrite("flag", &PsdPoint::flag);
    py::class_<PsdTrace>(m, "PsdTrace")
        .def(py::init<>())
        .def_readwrite("label", &PsdTrace::label)
        .def_readwrite("units", &PsdTrace::units)
        .def_readwrite("points", &PsdTrace::points)
        .def_readwrite("rbw_hz", &PsdTrace::rbw_hz)
        .def("validate", &PsdTrace::validate);

    m.def("sql_psd", &sql_psd, py::arg("power_w"), py::arg("nu0_hz"));
    m.def("sql_db", &sql_db, py::arg("power_w"), py::arg("nu0_hz"));
    m.def("db_from_linear", &db_from_linear, py::arg("x"));
    m.def("linear_from_db", &linear_from_db, py::arg("db"));
    m.def("variance_to_rel_psd", &variance_to_rel_psd, py::arg("variance_rel_shot"),
          py::arg("rbw_hz"));
    m.def("trace_to_db", &trace_to_db, py::arg("trace"));
    m.def("correct_rel_shot", &correct_rel_shot, py::arg("trace_db"), py::arg("cavity"));
    m.def("correct_and_calibrate", &correct_and_calibrate, py::arg("trace_db"),
          py::arg("cavity"), py::arg("sql_db"));
}
