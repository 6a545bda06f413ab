#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stmon/corpus.hpp"
#include "stmon/header.hpp"
#include "stmon/netmodel.hpp"
#include "stmon/parser.hpp"
#include "stmon/serialize.hpp"

namespace py = pybind11;
using namespace stmon;

namespace {

ProtocolDef resolve_protocol(const std::string& spec) {
  for (const auto& name : corpus_names())
    if (spec == name) return corpus_protocol(name);
  return protocol_from_json(spec);  // otherwise: protocol JSON text
}

py::dict verdict_dict(const Verdict& v) {
  py::dict d;
  d["holds"] = v.holds;
  py::list w;
  for (const auto& l : v.witness) w.append(to_string(l));
  d["witness"] = w;
  d["reason"] = v.reason;
  return d;
}

}  // namespace

PYBIND11_MODULE(stmon_py, m) {
  m.doc() = "session-type border monitors: synthesis, model checking, and "
            "packet-level simulation";

  m.def("parse_type",
        [](const std::string& dsl) { return to_string(parse_session_type(dsl)); },
        py::arg("dsl"),
        "Parse and validate a local session type; returns its normal form.");

  m.def("corpus_names", [] { return corpus_names(); });

  m.def("protocol_json",
        [](const std::string& spec) {
          return protocol_to_json(resolve_protocol(spec));
        },
        py::arg("protocol"),
        "Protocol file text for a corpus name (or normalize a given file).");

  m.def("synthesize_mat",
        [](const std::string& spec, const std::string& role,
           const std::string& format) {
          ProtocolDef p = resolve_protocol(spec);
          if (!p.roles.count(role))
            throw std::invalid_argument("no such role: " + role);
          auto r = synthesize_automaton(p.roles.at(role));
          if (auto* u = std::get_if<Unmonitorable>(&r))
            throw std::runtime_error("unmonitorable: " + u->reason);
          MatTable mat = automaton_to_mat(std::get<MonitorAutomaton>(r), role);
          if (format == "csv") return mat_to_csv(mat);
          if (format == "json") return mat_to_json(mat, p.ids());
          return mat_to_text(mat);
        },
        py::arg("protocol"), py::arg("role"), py::arg("format") = "text",
        "Monitor-action table for one role, as text, csv, or json.");

  m.def("check",
        [](const std::string& spec, int queue_bound) {
          ProtocolDef p = resolve_protocol(spec);
          ExplorationBounds b{queue_bound, 200000};
          Network n;
          for (const auto& [role, type] : p.roles)
            n.endpoints[role] = {type, {}};
          py::dict d;
          py::dict roles;
          for (const auto& [role, type] : p.roles)
            roles[py::str(role)] =
                std::holds_alternative<MonitorAutomaton>(
                    synthesize_automaton(type));
          d["monitorable"] = roles;
          d["half_duplex"] = verdict_dict(check_half_duplex(n, b));
          d["output_live"] = verdict_dict(check_output_live(n, b));
          auto mn = instrument(n);
          d["bisimilar"] = mn ? verdict_dict(internal_bisim(n, *mn, b))
                              : verdict_dict({false, {}, "not instrumentable"});
          return d;
        },
        py::arg("protocol"), py::arg("queue_bound") = 2,
        "Synthesizability, half-duplex, output-liveness, and soundness.");

  m.def("simulate",
        [](const std::string& name, const std::string& preset,
           std::uint64_t seed) {
          SimReport r =
              run_simulation(corpus_scenario(name, parse_preset(preset), seed));
          py::dict d;
          d["accepted"] = r.accepted;
          d["rejected"] = r.rejected;
          d["retransmissions"] = r.retransmissions;
          d["completed"] = r.completed;
          d["stuck"] = r.stuck;
          d["closed"] = r.closed;
          d["accepts_after_close"] = r.accepts_after_close;
          d["csv"] = r.csv(name + "-" + preset);
          return d;
        },
        py::arg("protocol"), py::arg("preset"), py::arg("seed") = 1,
        "Run a corpus scenario preset and return its statistics.");

  m.def("simulate_scenario",
        [](const std::string& scenario_json) {
          SimReport r = run_simulation(scenario_from_json(scenario_json));
          py::dict d;
          d["accepted"] = r.accepted;
          d["rejected"] = r.rejected;
          d["retransmissions"] = r.retransmissions;
          d["completed"] = r.completed;
          d["stuck"] = r.stuck;
          d["closed"] = r.closed;
          d["event_log"] = r.event_log;
          return d;
        },
        py::arg("scenario_json"), "Run a scenario file (JSON text).");

  m.def("encode_header",
        [](const py::dict& h) {
          SessionHeader s;
          s.msg_size = h["msg_size"].cast<std::uint8_t>();
          s.session_id = h["session_id"].cast<std::uint16_t>();
          s.label_id = h["label_id"].cast<std::uint8_t>();
          s.sender_id = h["sender_id"].cast<std::uint8_t>();
          s.receiver_id = h["receiver_id"].cast<std::uint8_t>();
          s.ssn = h["ssn"].cast<std::uint16_t>();
          auto b = ::stmon::encode_header(s);
          return py::bytes(reinterpret_cast<const char*>(b.data()), b.size());
        },
        py::arg("header"));

  m.def("decode_header",
        [](const py::bytes& raw) {
          std::string s = raw;
          if (s.size() != 6)
            throw std::invalid_argument("header must be 6 bytes");
          std::array<std::uint8_t, 6> b;
          std::copy(s.begin(), s.end(), b.begin());
          SessionHeader h = ::stmon::decode_header(b);
          py::dict d;
          d["msg_size"] = h.msg_size;
          d["session_id"] = h.session_id;
          d["label_id"] = h.label_id;
          d["sender_id"] = h.sender_id;
          d["receiver_id"] = h.receiver_id;
          d["ssn"] = h.ssn;
          return d;
        },
        py::arg("raw"));
}
