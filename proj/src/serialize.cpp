#include "stmon/serialize.hpp"

#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "stmon/parser.hpp"

namespace stmon {

using nlohmann::json;

std::string protocol_to_json(const ProtocolDef& p) {
  json j;
  j["name"] = p.name;
  j["initiator"] = p.initiator;
  json roles = json::object();
  for (const auto& [r, t] : p.roles) roles[r] = to_string(t);
  j["roles"] = roles;
  return j.dump(2) + "\n";
}

ProtocolDef protocol_from_json(const std::string& text) {
  json j = json::parse(text);
  ProtocolDef p;
  p.name = j.at("name").get<std::string>();
  p.initiator = j.at("initiator").get<std::string>();
  for (const auto& [role, src] : j.at("roles").items())
    p.roles[role] = parse_session_type(src.get<std::string>());
  if (!p.roles.count(p.initiator))
    throw ValidationError("initiator " + p.initiator + " has no local type");
  return p;
}

std::string mat_to_text(const MatTable& mat) {
  std::ostringstream out;
  out << "monitored " << mat.monitored << "\nstates " << mat.num_states
      << "\ninitial m" << mat.initial << "\n";
  for (const auto& r : mat.rows)
    out << "m" << r.state << ": " << r.sender << " -> " << r.receiver << " "
        << r.label << "(" << r.sort << ") => m" << r.next << "\n";
  out << "otherwise: reject\n";
  return out.str();
}

std::string mat_to_csv(const MatTable& mat) {
  std::ostringstream out;
  out << "state,sender,receiver,label,sort,next\n";
  for (const auto& r : mat.rows)
    out << r.state << ',' << r.sender << ',' << r.receiver << ',' << r.label
        << ',' << r.sort << ',' << r.next << "\n";
  return out.str();
}

std::string mat_to_json(const MatTable& mat, const IdMap& ids) {
  json j;
  j["monitored"] = mat.monitored;
  j["num_states"] = mat.num_states;
  j["initial"] = mat.initial;
  json rows = json::array();
  for (const auto& r : mat.rows)
    rows.push_back({{"state", r.state},
                    {"sender", r.sender},
                    {"receiver", r.receiver},
                    {"label", r.label},
                    {"sort", r.sort},
                    {"next", r.next}});
  j["rows"] = rows;
  j["role_ids"] = ids.role_ids;
  j["label_ids"] = ids.label_ids;
  return j.dump(2) + "\n";
}

std::string automaton_to_text(const MonitorAutomaton& a) {
  std::ostringstream out;
  out << "states " << a.states.size() << "\n";
  for (std::size_t i = 0; i < a.states.size(); ++i)
    out << "m" << i << " = " << to_string(a.states[i]) << "\n";
  for (const auto& t : a.transitions)
    out << "m" << t.from << " --" << to_string(t.act) << "--> m" << t.to
        << "\n";
  return out.str();
}

std::string joint_to_text(const JointAutomaton& a) {
  std::ostringstream out;
  out << "states " << a.states.size() << "\n";
  for (std::size_t i = 0; i < a.states.size(); ++i)
    out << "j" << i << " = (m" << a.states[i].first << ", m"
        << a.states[i].second << ")\n";
  for (const auto& t : a.transitions)
    out << "j" << t.from << " --" << t.sender << "->" << t.receiver << ":"
        << t.label << "(" << t.sort << ")--> j" << t.to << "\n";
  return out.str();
}

namespace {

TransportKind transport_from_string(const std::string& s) {
  if (s == "datagram") return TransportKind::Datagram;
  if (s == "reliable") return TransportKind::Reliable;
  if (s == "lossy") return TransportKind::Lossy;
  throw std::invalid_argument("unknown transport: " + s);
}

std::string transport_to_string(TransportKind k) {
  switch (k) {
    case TransportKind::Datagram: return "datagram";
    case TransportKind::Reliable: return "reliable";
    case TransportKind::Lossy: return "lossy";
  }
  return "?";
}

SessionScript script_from_json(const json& j) {
  SessionScript s;
  s.faulty = j.value("faulty", false);
  if (j.contains("picks"))
    for (const auto& [role, picks] : j.at("picks").items())
      for (const auto& pick : picks)
        s.picks[role].emplace_back(pick.at(0).get<std::string>(),
                                   pick.at(1).get<std::string>());
  return s;
}

json script_to_json(const SessionScript& s) {
  json j = json::object();
  j["faulty"] = s.faulty;
  json picks = json::object();
  for (const auto& [role, ps] : s.picks) {
    json arr = json::array();
    for (const auto& [to, label] : ps) arr.push_back({to, label});
    picks[role] = arr;
  }
  j["picks"] = picks;
  return j;
}

}  // namespace

Scenario scenario_from_json(const std::string& text) {
  json j = json::parse(text);
  const json& pj = j.at("protocol");
  ProtocolDef proto = pj.is_string()
                          ? corpus_protocol(pj.get<std::string>())
                          : protocol_from_json(pj.dump());
  if (j.contains("preset")) {
    if (!pj.is_string())
      throw std::invalid_argument("presets require a corpus protocol name");
    Scenario sc = corpus_scenario(pj.get<std::string>(),
                                  parse_preset(j.at("preset")),
                                  j.value("seed", std::uint64_t{1}));
    return sc;
  }
  Scenario sc;
  sc.protocol = std::move(proto);
  sc.transport = transport_from_string(j.value("transport", "datagram"));
  const json& sessions = j.at("sessions");
  if (sessions.is_number_integer()) {
    sc.sessions.assign(sessions.get<std::size_t>(), {});
  } else {
    for (const auto& sj : sessions) sc.sessions.push_back(script_from_json(sj));
  }
  if (j.contains("fault")) {
    const json& f = j.at("fault");
    sc.fault = FaultSpec{f.at("role"), f.at("before_send_index"), f.at("to"),
                         f.at("label"), f.value("repeat", 1)};
  }
  sc.seed = j.value("seed", std::uint64_t{1});
  sc.loss_pct = j.value("loss_pct", sc.loss_pct);
  sc.dup_pct = j.value("dup_pct", sc.dup_pct);
  sc.max_delay_us = j.value("max_delay_us", sc.max_delay_us);
  return sc;
}

std::string scenario_to_json(const Scenario& sc) {
  json j;
  j["protocol"] = json::parse(protocol_to_json(sc.protocol));
  j["transport"] = transport_to_string(sc.transport);
  json sessions = json::array();
  for (const auto& s : sc.sessions) sessions.push_back(script_to_json(s));
  j["sessions"] = sessions;
  if (sc.fault)
    j["fault"] = {{"role", sc.fault->role},
                  {"before_send_index", sc.fault->before_send_index},
                  {"to", sc.fault->to},
                  {"label", sc.fault->label},
                  {"repeat", sc.fault->repeat}};
  j["seed"] = sc.seed;
  j["loss_pct"] = sc.loss_pct;
  j["dup_pct"] = sc.dup_pct;
  j["max_delay_us"] = sc.max_delay_us;
  return j.dump(2) + "\n";
}

}  // namespace stmon
