#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dlraman/adiabatic.hpp"
#include "dlraman/cavity.hpp"
#include "dlraman/sweep.hpp"

namespace py = pybind11;
using namespace dlraman;

namespace {

ValidatedConfig make_beams(double omega13, double omega23, double omega14, double omega24, double delta3,
                           double delta4, double phi0, double two_photon, double gamma4, double ground_decoherence) {
  BeamSet b;
  b.omega13 = omega13;
  b.omega23 = omega23;
  b.omega14 = omega14;
  b.omega24 = omega24;
  b.delta3 = delta3;
  b.delta4 = delta4;
  b.phi0 = phi0;
  b.two_photon = two_photon;
  b.gamma4 = gamma4;
  b.ground_decoherence = ground_decoherence;
  return make_config(b);
}

}  // namespace

PYBIND11_MODULE(_dlraman, m) {
  m.doc() = "Double-Lambda bi-frequency Raman laser simulator";

  static py::exception<Error> exc(m, "DlramanError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = exc;
      PyErr_SetObject(err.ptr(), py::make_tuple(std::string(to_string(e.code())), e.what()).ptr());
    }
  });

  py::enum_<Engine>(m, "Engine").value("Exact", Engine::Exact).value("Effective", Engine::Effective);

  py::class_<DecayModel>(m, "DecayModel")
      .def(py::init<>())
      .def(py::init([](double b3, double b4) { return DecayModel{b3, b4}; }), py::arg("branch3"), py::arg("branch4"))
      .def_readwrite("branch3", &DecayModel::branch3)
      .def_readwrite("branch4", &DecayModel::branch4);

  py::class_<ValidatedConfig>(m, "Config")
      .def_property_readonly("delta3", &ValidatedConfig::delta3)
      .def_property_readonly("delta4", &ValidatedConfig::delta4)
      .def_property_readonly("two_photon", &ValidatedConfig::two_photon)
      .def_property_readonly("omega3", &ValidatedConfig::omega3)
      .def_property_readonly("omega4", &ValidatedConfig::omega4)
      .def_property_readonly("gamma4", &ValidatedConfig::gamma4)
      .def_property_readonly("probe_perturbative", &ValidatedConfig::probe_perturbative)
      .def_property_readonly("phi0", [](const ValidatedConfig& c) { return closed_loop_phase(c); })
      .def("with_phi0", &with_closed_loop_phase)
      .def("with_delta4", &with_probe_detuning)
      .def("with_delta3", &with_pump_detuning)
      .def("__eq__", [](const ValidatedConfig& a, const ValidatedConfig& b) { return a == b; });

  m.def("beams", &make_beams, py::arg("omega13"), py::arg("omega23"), py::arg("omega14"), py::arg("omega24"),
        py::arg("delta3"), py::arg("delta4"), py::arg("phi0") = 0.0, py::arg("two_photon") = 0.0,
        py::arg("gamma4") = 1.05, py::arg("ground_decoherence") = 0.0,
        "Configuration from Rabi frequencies and detunings in units of Gamma3.");
  m.def("equal_beams", &equal_beams, py::arg("omega3"), py::arg("delta3"), py::arg("omega4"), py::arg("delta4"),
        py::arg("phi0"), py::arg("gamma4") = 1.05);
  m.def("fig2_config", &fig2_config, py::arg("delta4"), py::arg("phi0"));
  m.def("fig4_config", &fig4_config, py::arg("delta4"), py::arg("phi0"));

  m.def("hamiltonian", &build_hamiltonian_rwa);
  m.def("liouvillian", [](const ValidatedConfig& c, const DecayModel& d) { return build_liouvillian(c, d).matrix; },
        py::arg("config"), py::arg("decay") = DecayModel{});
  m.def("steady_state",
        [](const ValidatedConfig& c, const DecayModel& d) { return exact_steady_state(c, d).matrix(); },
        py::arg("config"), py::arg("decay") = DecayModel{});
  m.def(
      "evolve",
      [](const ValidatedConfig& c, double t_final, double dt, int stride, const DecayModel& d) {
        const Liouvillian l = build_liouvillian(c, d);
        EvolveOptions o;
        o.sample_stride = stride;
        const Trajectory tr = evolve(l, DensityMatrix::basis_state(4, 0), t_final, dt > 0 ? dt : max_stable_step(l), o);
        std::vector<CMatrix> states;
        for (const auto& s : tr.states) states.push_back(s.matrix());
        return py::make_tuple(tr.times, states);
      },
      py::arg("config"), py::arg("t_final"), py::arg("dt") = 0.0, py::arg("stride") = 10,
      py::arg("decay") = DecayModel{}, "Evolve from |1><1|; returns (times, states).");

  m.def("probe_coherences",
        [](const ValidatedConfig& c, Engine e, const DecayModel& d) {
          const ProbeCoherences p = probe_coherences(c, e, d);
          return py::make_tuple(p.rho14, p.rho24);
        },
        py::arg("config"), py::arg("engine") = Engine::Exact, py::arg("decay") = DecayModel{});

  py::class_<EffectiveTwoLevel>(m, "EffectiveTwoLevel")
      .def_readonly("l3", &EffectiveTwoLevel::l3)
      .def_readonly("gamma_eq", &EffectiveTwoLevel::gamma_eq)
      .def_readonly("h_d4", &EffectiveTwoLevel::h_d4)
      .def_readonly("h_b4", &EffectiveTwoLevel::h_b4)
      .def_readonly("omega_eq", &EffectiveTwoLevel::omega_eq)
      .def_readonly("omega1", &EffectiveTwoLevel::omega1)
      .def_readonly("omega2", &EffectiveTwoLevel::omega2)
      .def_readonly("hamiltonian", &EffectiveTwoLevel::hamiltonian2);
  m.def("final_two_level", &final_two_level);
  m.def("two_level_steady_state",
        [](const EffectiveTwoLevel& e) { return two_level_steady_state(e).matrix(); });
  m.def("analytic_equal_beams_state",
        [](double o3, double d3, double o4, double d4, double phi) {
          const AnalyticTwoLevel a = analytic_equal_beams_state(o3, d3, o4, d4, phi);
          return py::make_tuple(a.rho_bb, a.rho_db);
        },
        py::arg("omega3"), py::arg("delta3"), py::arg("omega4"), py::arg("delta4"), py::arg("phi0"));

  py::class_<MediumParams>(m, "MediumParams")
      .def(py::init<>())
      .def_readwrite("density", &MediumParams::density)
      .def_readwrite("dipole14", &MediumParams::dipole14)
      .def_readwrite("dipole24", &MediumParams::dipole24)
      .def_readwrite("calibration", &MediumParams::calibration);
  m.def("medium_response",
        [](const ValidatedConfig& c, const MediumParams& med, Engine e) {
          const MediumResponse r = medium_response(c, med, e);
          py::dict d;
          d["xi14"] = r.xi14;
          d["xi24"] = r.xi24;
          d["alpha14"] = r.alpha14;
          d["alpha24"] = r.alpha24;
          return d;
        },
        py::arg("config"), py::arg("medium") = MediumParams{}, py::arg("engine") = Engine::Exact);

  m.def("cavity_length", &cavity_length, py::arg("splitting"), py::arg("mode_index") = 1);
  m.def("threshold_gain",
        [](double splitting, int mode_index, double t) {
          const Threshold th = threshold_gain(make_cavity(splitting, mode_index, t));
          return py::make_tuple(th.alpha, th.per_pass);
        },
        py::arg("splitting"), py::arg("mode_index"), py::arg("transmittivity"));
  m.def(
      "equal_gain_points",
      [](const ValidatedConfig& c, double delta4, const MediumParams& med, int samples, int parallel) {
        EqualGainOptions o;
        o.samples = samples;
        o.parallel = parallel;
        const EqualGainSearch s = scan_equal_gain(c, delta4, med, o);
        py::list out;
        for (const LasingPoint& p : s.points) out.append(py::make_tuple(p.phi0, p.alpha14, p.alpha24));
        return out;
      },
      py::arg("config"), py::arg("delta4"), py::arg("medium") = MediumParams{}, py::arg("samples") = 720,
      py::arg("parallel") = 1, "Equal-gain crossings as (phi0, alpha14, alpha24).");
  m.def("calibrate_medium",
        [](const ValidatedConfig& c, double delta4, const MediumParams& med, double target) {
          return calibrate_medium(c, delta4, med, target);
        });

  m.def("verify_adiabaticity",
        [](const ValidatedConfig& c, double t_final) {
          const AdiabaticityReport r = verify_adiabaticity(c, t_final);
          auto side = [](const DeviationStats& s) {
            py::dict d;
            d["mean_relative"] = s.mean_relative;
            d["max_relative"] = s.max_relative;
            d["steady_relative"] = s.steady_relative;
            d["flagged"] = s.flagged;
            d["active"] = s.active;
            return d;
          };
          py::dict d;
          d["pump"] = side(r.pump);
          d["probe"] = side(r.probe);
          return d;
        },
        py::arg("config"), py::arg("t_final") = 20.0);

  m.def(
      "run_sweep",
      [](const std::string& scenario_text, const std::vector<std::string>& axes, const std::string& engine,
         const std::vector<std::string>& outputs, int parallel) {
        SweepSpec spec;
        if (axes.empty() || axes.size() > 2) throw Error(ErrorCode::InvalidSweep, "one or two axes");
        spec.axis1 = parse_axis(axes[0]);
        if (axes.size() == 2) spec.axis2 = parse_axis(axes[1]);
        spec.engine = parse_engine(engine);
        if (!outputs.empty()) spec.outputs = outputs;
        return to_csv(run_sweep(spec, parse_scenario(scenario_text), parallel));
      },
      py::arg("scenario"), py::arg("axes"), py::arg("engine") = "exact", py::arg("outputs") = std::vector<std::string>{},
      py::arg("parallel") = 1, "Sweep a scenario text; returns the CSV document.");
  m.def("preset_text", &preset_text);
}
