#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hipsim/abouaf.hpp"
#include "hipsim/calibration.hpp"
#include "hipsim/config.hpp"
#include "hipsim/csv.hpp"
#include "hipsim/integrator.hpp"
#include "hipsim/mccp.hpp"
#include "hipsim/tables.hpp"

namespace py = pybind11;
using namespace hipsim;

namespace {

SymTensor3 tensor_from_seq(const std::vector<double>& v) {
  if (v.size() != 6) {
    throw py::value_error("expected 6 components (xx, yy, zz, xy, yz, xz)");
  }
  return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

LoadingProgram hip_program(const HipSchedule& schedule, double rho0, double T_ref) {
  LoadingProgram prog;
  prog.mode = HydrostaticHip{schedule};
  prog.rho0 = rho0;
  prog.T_ref = T_ref;
  return prog;
}

LoadingProgram uniaxial_program(double strain_rate, double T, double duration,
                                double rho0) {
  LoadingProgram prog;
  prog.mode = UniaxialCompression{strain_rate, T, duration};
  prog.rho0 = rho0;
  return prog;
}

Trajectory run_or_throw(const LoadingProgram& prog, const ModelSelection& model,
                        const MaterialTables& tables, const IntegratorOptions& opt) {
  IntegrateResult res = integrate(prog, model, tables, opt);
  if (!res.completed) throw std::runtime_error(res.failure);
  return std::move(res.trajectory);
}

}  // namespace

PYBIND11_MODULE(_hipsim, m) {
  m.doc() = "Material-point simulator and calibration toolkit for "
            "powder-densification constitutive models";

  py::class_<SymTensor3>(m, "SymTensor3")
      .def(py::init(&tensor_from_seq), py::arg("components"))
      .def_static("diag", &SymTensor3::diag)
      .def_static("iso", &SymTensor3::iso)
      .def_static("identity", &SymTensor3::identity)
      .def("trace", &SymTensor3::trace)
      .def("deviator", &SymTensor3::deviator)
      .def("components", &SymTensor3::components)
      .def_readonly("xx", &SymTensor3::xx)
      .def_readonly("yy", &SymTensor3::yy)
      .def_readonly("zz", &SymTensor3::zz)
      .def_readonly("xy", &SymTensor3::xy)
      .def_readonly("yz", &SymTensor3::yz)
      .def_readonly("xz", &SymTensor3::xz);

  py::class_<StressInvariants>(m, "StressInvariants")
      .def_readonly("I1", &StressInvariants::I1)
      .def_readonly("J2", &StressInvariants::J2)
      .def_readonly("p", &StressInvariants::p)
      .def_readonly("q", &StressInvariants::q);

  m.def("invariants", &invariants, py::arg("stress"));

  py::class_<MaterialTables>(m, "MaterialTables")
      .def_static("load", &load_material_tables, py::arg("path"))
      .def_static("from_json", &material_tables_from_json_text, py::arg("text"))
      .def("to_json", &material_tables_json_text, py::arg("description") = "")
      .def("lookup_AN", &MaterialTables::lookup_AN, py::arg("T"))
      .def("lookup_cf", &MaterialTables::lookup_cf, py::arg("rho"))
      .def("youngs_modulus", &MaterialTables::youngs_modulus)
      .def("poisson_ratio", &MaterialTables::poisson_ratio)
      .def("cte", &MaterialTables::cte);

  m.def("equivalent_stress", &equivalent_stress, py::arg("inv"), py::arg("c"),
        py::arg("f"));
  m.def("vp_strain_rate", &vp_strain_rate, py::arg("stress"), py::arg("T"),
        py::arg("rho"), py::arg("tables"));
  m.def("density_update", &density_update, py::arg("rho0"), py::arg("eps_vol_vp"));
  m.def("elastic_stress", &elastic_stress, py::arg("eps_e"), py::arg("T"),
        py::arg("rho"), py::arg("tables"));
  m.def("thermal_strain", &thermal_strain, py::arg("T"), py::arg("T_ref"),
        py::arg("rho"), py::arg("tables"));

  py::class_<VpIncrement>(m, "VpIncrement")
      .def_readonly("d_sw", &VpIncrement::d_sw)
      .def_readonly("d_cr", &VpIncrement::d_cr)
      .def_readonly("direction", &VpIncrement::direction)
      .def("tensor", &VpIncrement::tensor);
  m.def("vp_increments", &vp_increments, py::arg("stress"), py::arg("T"),
        py::arg("rho"), py::arg("tables"), py::arg("dt"));

  py::class_<VpDerivatives>(m, "VpDerivatives")
      .def_readonly("dcr_desw", &VpDerivatives::dcr_desw)
      .def_readonly("dcr_dp", &VpDerivatives::dcr_dp)
      .def_readonly("dcr_dq", &VpDerivatives::dcr_dq)
      .def_readonly("dsw_desw", &VpDerivatives::dsw_desw)
      .def_readonly("dsw_dp", &VpDerivatives::dsw_dp)
      .def_readonly("dsw_dq", &VpDerivatives::dsw_dq);
  m.def("vp_derivatives", &vp_derivatives, py::arg("stress"), py::arg("T"),
        py::arg("rho"), py::arg("tables"), py::arg("dt"));

  m.def("yield_value", &yield_value, py::arg("inv"), py::arg("a"), py::arg("M"));

  py::class_<HipSchedule>(m, "HipSchedule")
      .def_static("load", &load_schedule, py::arg("path"))
      .def_static("from_json", &schedule_from_json_text, py::arg("text"))
      .def("pressure", &HipSchedule::pressure)
      .def("temperature", &HipSchedule::temperature)
      .def("end_time", &HipSchedule::end_time);

  py::class_<MccpParams>(m, "MccpParams")
      .def_static("load", &load_mccp_params, py::arg("path"), py::arg("rho0"))
      .def("M", &MccpParams::M)
      .def("semiaxis", &MccpParams::semiaxis);

  py::class_<IntegratorOptions>(m, "IntegratorOptions")
      .def(py::init<>())
      .def_readwrite("dt_min", &IntegratorOptions::dt_min)
      .def_readwrite("dt_max", &IntegratorOptions::dt_max)
      .def_readwrite("newton_tol", &IntegratorOptions::newton_tol)
      .def_readwrite("max_drho", &IntegratorOptions::max_drho)
      .def_readwrite("max_dstrain", &IntegratorOptions::max_dstrain)
      .def_readwrite("sample_dt", &IntegratorOptions::sample_dt);

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("t", &Trajectory::t)
      .def_readonly("T", &Trajectory::T)
      .def_readonly("P", &Trajectory::P)
      .def_readonly("rho", &Trajectory::rho)
      .def_readonly("sigma_eqv", &Trajectory::sigma_eqv)
      .def("stress", [](const Trajectory& tr, std::size_t i) { return tr.stress.at(i); })
      .def("strain", [](const Trajectory& tr, std::size_t i) { return tr.strain.at(i); })
      .def("size", &Trajectory::size)
      .def("to_csv", &trajectory_csv);

  m.def(
      "integrate_hip",
      [](const MaterialTables& tables, const HipSchedule& schedule, double rho0,
         double T_ref, const IntegratorOptions& opt) {
        return run_or_throw(hip_program(schedule, rho0, T_ref), AbouafModel{},
                            tables, opt);
      },
      py::arg("tables"), py::arg("schedule"), py::arg("rho0"),
      py::arg("T_ref") = 20.0, py::arg("options") = IntegratorOptions{});
  m.def(
      "integrate_hip_mccp",
      [](const MaterialTables& tables, const MccpParams& mccp,
         const HipSchedule& schedule, double rho0, double T_ref,
         const IntegratorOptions& opt) {
        return run_or_throw(hip_program(schedule, rho0, T_ref), MccpModel{mccp},
                            tables, opt);
      },
      py::arg("tables"), py::arg("mccp"), py::arg("schedule"), py::arg("rho0"),
      py::arg("T_ref") = 20.0, py::arg("options") = IntegratorOptions{});
  m.def(
      "integrate_uniaxial",
      [](const MaterialTables& tables, double strain_rate, double T,
         double duration, double rho0, const IntegratorOptions& opt) {
        return run_or_throw(uniaxial_program(strain_rate, T, duration, rho0),
                            AbouafModel{}, tables, opt);
      },
      py::arg("tables"), py::arg("strain_rate"), py::arg("T"),
      py::arg("duration"), py::arg("rho0") = 1.0,
      py::arg("options") = IntegratorOptions{});

  m.def("extract_yield_stress", &extract_yield_stress, py::arg("trajectory"),
        py::arg("E_eff"));
  m.def("simulate_sigma02",
        [](const MaterialTables& tables, double T, double rate, double rho0) {
          return simulate_sigma02(tables, T, rate, rho0, IntegratorOptions{});
        },
        py::arg("tables"), py::arg("T"), py::arg("rate"), py::arg("rho0") = 1.0);
}
