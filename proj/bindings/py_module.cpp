#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lncsim/cli.hpp"
#include "lncsim/metrics.hpp"
#include "lncsim/oracle.hpp"
#include "lncsim/schemes.hpp"
#include "lncsim/session.hpp"
#include "lncsim/sfmgen.hpp"
#include "lncsim/version.hpp"

namespace py = pybind11;
using namespace lnc;

namespace {

py::object to_fraction(const Rational& r) {
  py::object fraction = py::module_::import("fractions").attr("Fraction");
  return fraction(r.num(), r.den());
}

GfField field_for_order(int order) { return GfField(FieldSpec::for_order(static_cast<std::uint32_t>(order))); }

// 0 means "pick for the scheme": XOR-based schemes run on GF(2), everything
// else on GF(256).
int auto_field_order(const SchemeSpec& spec, int requested) {
  if (requested != 0) return requested;
  switch (spec.kind) {
    case SchemeKind::MemorylessHalving:
    case SchemeKind::IdncGreedy:
    case SchemeKind::UncodedRoundRobin:
      return 2;
    case SchemeKind::Partitioned:
      return auto_field_order(*spec.inner, 0);
    default:
      return 256;
  }
}

struct PySessionRun {
  SessionResult result;
  Sfm sfm;
};

PySessionRun run_session_py(const Sfm& sfm, const std::string& scheme, py::object pe, int field,
                            const std::string& memory, std::uint64_t seed, long max_slots) {
  const SchemeSpec spec = SchemeSpec::parse(scheme);
  std::vector<double> pe_list;
  if (!pe.is_none()) {
    if (py::isinstance<py::float_>(pe) || py::isinstance<py::int_>(pe))
      pe_list.push_back(pe.cast<double>());
    else
      pe_list = pe.cast<std::vector<double>>();
  }
  const GfField gf = field_for_order(auto_field_order(spec, field));
  Session session(sfm, resolve_channel(pe_list, sfm.receivers()), gf, spec,
                  parse_memory_mode(memory), seed);
  return {max_slots > 0 ? session.run(max_slots) : session.run(), sfm};
}

Estimates monte_carlo_py(const Sfm& sfm, const std::string& scheme, long trials,
                         std::uint64_t seed, py::object pe, int field, const std::string& memory,
                         long max_slots) {
  const SchemeSpec spec = SchemeSpec::parse(scheme);
  std::vector<double> pe_list;
  if (!pe.is_none()) {
    if (py::isinstance<py::float_>(pe) || py::isinstance<py::int_>(pe))
      pe_list.push_back(pe.cast<double>());
    else
      pe_list = pe.cast<std::vector<double>>();
  }
  const GfField gf = field_for_order(auto_field_order(spec, field));
  return monte_carlo(sfm, resolve_channel(pe_list, sfm.receivers()), gf, spec,
                     parse_memory_mode(memory), trials, seed, max_slots);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Linear network coded broadcast simulator core";
  m.attr("__version__") = kVersion;

  py::register_exception<MetricUndefinedError>(m, "MetricUndefined", PyExc_ValueError);
  py::register_exception<oracle::CapabilityError>(m, "CapabilityExceeded", PyExc_ValueError);

  py::class_<GfField>(m, "Field")
      .def(py::init(&field_for_order), py::arg("order"))
      .def_property_readonly("order", &GfField::order)
      .def_property_readonly("m", &GfField::m)
      .def("add", &GfField::add)
      .def("mul", &GfField::mul)
      .def("inv", &GfField::inv)
      .def("__repr__", [](const GfField& f) { return "<" + f.name() + ">"; });

  py::class_<EliminationState>(m, "EliminationState")
      .def(py::init<const GfField&, int, std::vector<int>>(), py::arg("field"),
           py::arg("k_packets"), py::arg("side_info") = std::vector<int>{},
           py::keep_alive<1, 2>())
      .def_property_readonly("rank", &EliminationState::rank)
      .def_property_readonly("decoded", &EliminationState::decoded)
      .def("is_decoded", &EliminationState::is_decoded)
      .def("is_innovative", &EliminationState::is_innovative)
      .def("absorb", &EliminationState::absorb);

  py::class_<Sfm>(m, "Sfm")
      .def_property_readonly("receivers", &Sfm::receivers)
      .def_property_readonly("packets", &Sfm::packets)
      .def("wants", &Sfm::wants, py::arg("receiver"), py::arg("packet"))
      .def("weight", &Sfm::weight, py::arg("receiver"))
      .def_property_readonly("max_weight", &Sfm::max_weight)
      .def_property_readonly("total_wants", &Sfm::total_wants)
      .def("wanted_by", &Sfm::wanted_by)
      .def("side_info", &Sfm::side_info)
      .def("__eq__", [](const Sfm& a, const Sfm& b) { return a == b; })
      .def("__repr__", [](const Sfm& s) {
        return "<Sfm N=" + std::to_string(s.receivers()) + " K=" + std::to_string(s.packets()) + ">";
      });

  m.def("gen_a1", &gen_a1, py::arg("k"));
  m.def("gen_a2", &gen_a2, py::arg("k"), py::arg("m"));
  m.def("gen_theorem2", &gen_theorem2);
  m.def("gen_theorem5", &gen_theorem5, py::arg("w1"), py::arg("n_receivers"));
  m.def("gen_random", &gen_random, py::arg("n_receivers"), py::arg("k_packets"), py::arg("p_want"),
        py::arg("seed"));
  m.def("parse_sfm", &parse_sfm);
  m.def("serialize_sfm", &serialize_sfm);

  py::class_<PySessionRun>(m, "SessionResult")
      .def_property_readonly("decode_slot",
                             [](const PySessionRun& r) { return r.result.decode_slot; })
      .def_property_readonly("completion_slot",
                             [](const PySessionRun& r) { return r.result.completion_slot; })
      .def_property_readonly("completion", [](const PySessionRun& r) { return r.result.completion; })
      .def_property_readonly("completed", [](const PySessionRun& r) { return r.result.completed; })
      .def_property_readonly("slots_used", [](const PySessionRun& r) { return r.result.slots_used; })
      .def("apdd_receiver",
           [](const PySessionRun& r, int n) { return to_fraction(apdd_receiver(r.result, r.sfm, n)); })
      .def("apdd_overall",
           [](const PySessionRun& r) { return to_fraction(apdd_overall(r.result, r.sfm)); });

  m.def("run_session", &run_session_py, py::arg("sfm"), py::arg("scheme"), py::kw_only(),
        py::arg("pe") = py::none(), py::arg("field") = 0, py::arg("memory") = "full",
        py::arg("seed") = 1, py::arg("max_slots") = 0,
        "Run one seeded session to completion (or the slot cap).");

  py::class_<Estimates>(m, "Estimates")
      .def_readonly("e_un", &Estimates::e_un)
      .def_readonly("se_un", &Estimates::se_un)
      .def_readonly("e_dn", &Estimates::e_dn)
      .def_readonly("se_dn", &Estimates::se_dn)
      .def_readonly("e_u", &Estimates::e_u)
      .def_readonly("se_u", &Estimates::se_u)
      .def_readonly("e_d", &Estimates::e_d)
      .def_readonly("se_d", &Estimates::se_d)
      .def_readonly("trials", &Estimates::trials)
      .def_readonly("truncated", &Estimates::truncated)
      .def_readonly("truncation_warning", &Estimates::truncation_warning);

  m.def("monte_carlo", &monte_carlo_py, py::arg("sfm"), py::arg("scheme"), py::arg("trials"),
        py::arg("seed"), py::kw_only(), py::arg("pe") = py::none(), py::arg("field") = 0,
        py::arg("memory") = "full", py::arg("max_slots") = 0);

  py::class_<Bounds>(m, "Bounds")
      .def_readonly("u_lower", &Bounds::u_lower)
      .def_readonly("d_lower", &Bounds::d_lower)
      .def_readonly("u_lower_overall", &Bounds::u_lower_overall)
      .def_readonly("d_lower_overall", &Bounds::d_lower_overall);

  m.def(
      "bounds",
      [](const Sfm& sfm, py::object pe) {
        if (pe.is_none()) return bounds(sfm);
        std::vector<double> pe_list;
        if (py::isinstance<py::float_>(pe) || py::isinstance<py::int_>(pe))
          pe_list.push_back(pe.cast<double>());
        else
          pe_list = pe.cast<std::vector<double>>();
        return bounds(sfm, resolve_channel(pe_list, sfm.receivers()));
      },
      py::arg("sfm"), py::arg("pe") = py::none());

  py::class_<ApproxReport>(m, "ApproxReport")
      .def_readonly("throughput_ratio", &ApproxReport::throughput_ratio)
      .def_readonly("apdd_ratio", &ApproxReport::apdd_ratio)
      .def_readonly("strong_throughput", &ApproxReport::strong_throughput)
      .def_readonly("strong_apdd", &ApproxReport::strong_apdd)
      .def_readonly("weak_throughput", &ApproxReport::weak_throughput)
      .def_readonly("weak_apdd", &ApproxReport::weak_apdd)
      .def_readonly("trials", &ApproxReport::trials);

  m.def("approximation_report", &approximation_report, py::arg("estimates"), py::arg("bounds"),
        py::arg("sfm"));

  py::class_<oracle::OracleResult>(m, "OracleResult")
      .def_readonly("feasible", &oracle::OracleResult::feasible)
      .def_readonly("completion", &oracle::OracleResult::completion)
      .def_property_readonly("apdd",
                             [](const oracle::OracleResult& r) { return to_fraction(r.apdd); })
      .def_readonly("witness", &oracle::OracleResult::witness)
      .def_readonly("nodes_explored", &oracle::OracleResult::nodes_explored);

  m.def(
      "min_completion",
      [](const Sfm& sfm, int field, int horizon) {
        return oracle::min_completion(sfm, FieldSpec::for_order(static_cast<std::uint32_t>(field)),
                                      horizon);
      },
      py::arg("sfm"), py::arg("field") = 2, py::arg("horizon") = 0);
  m.def(
      "min_apdd",
      [](const Sfm& sfm, int field, int horizon) {
        return oracle::min_apdd(sfm, FieldSpec::for_order(static_cast<std::uint32_t>(field)),
                                horizon);
      },
      py::arg("sfm"), py::arg("field") = 2, py::arg("horizon") = 0);
  m.def(
      "min_apdd_receiver",
      [](const Sfm& sfm, int n) { return to_fraction(oracle::min_apdd_receiver(sfm, n)); },
      py::arg("sfm"), py::arg("receiver"));
}
