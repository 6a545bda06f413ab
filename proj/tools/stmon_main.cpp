#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "stmon/corpus.hpp"
#include "stmon/netmodel.hpp"
#include "stmon/parser.hpp"
#include "stmon/serialize.hpp"

using namespace stmon;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A --protocol value is either a corpus name or a path to a protocol file.
ProtocolDef load_protocol(const std::string& spec) {
  for (const auto& name : corpus_names())
    if (spec == name) return corpus_protocol(name);
  return protocol_from_json(slurp(spec));
}

Network make_network(const ProtocolDef& p) {
  Network n;
  for (const auto& [role, type] : p.roles) n.endpoints[role] = {type, {}};
  return n;
}

void write_out(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw std::runtime_error("cannot write " + out);
  f << text;
}

struct CommonOpts {
  std::string protocol;
  std::string format = "text";
  std::string out;
  int queue_bound = 2;
  long max_states = 200000;
  std::uint64_t seed = 1;
};

int cmd_check(const CommonOpts& o) {
  ProtocolDef p = load_protocol(o.protocol);
  bool ok = true;
  std::ostringstream report;
  report << "protocol " << p.name << "\n";
  for (const auto& [role, type] : p.roles) {
    auto r = synthesize_automaton(type);
    if (auto* u = std::get_if<Unmonitorable>(&r)) {
      ok = false;
      report << "  role " << role << ": unmonitorable (" << u->reason << ")\n";
    } else {
      report << "  role " << role << ": monitorable, "
             << std::get<MonitorAutomaton>(r).states.size() << " states\n";
    }
  }
  ExplorationBounds b{o.queue_bound, o.max_states};
  Network n = make_network(p);
  Verdict hd = check_half_duplex(n, b);
  report << "  half-duplex: " << (hd.holds ? "holds" : "fails") << "\n";
  if (!hd.holds) {
    ok = false;
    for (const auto& l : hd.witness) report << "    " << to_string(l) << "\n";
  }
  Verdict ol = check_output_live(n, b);
  report << "  output-live: " << (ol.holds ? "holds" : "fails") << "\n";
  if (!ol.holds) {
    ok = false;
    for (const auto& l : ol.witness) report << "    " << to_string(l) << "\n";
  }
  write_out(o.out, report.str());
  return ok ? 0 : 1;
}

int cmd_synth(const CommonOpts& o, const std::string& role) {
  ProtocolDef p = load_protocol(o.protocol);
  if (!p.roles.count(role)) throw std::runtime_error("no such role: " + role);
  auto r = synthesize_automaton(p.roles.at(role));
  if (auto* u = std::get_if<Unmonitorable>(&r)) {
    std::cerr << "unmonitorable: " << u->reason << "\n  witness: " << u->witness
              << "\n";
    return 1;
  }
  const auto& a = std::get<MonitorAutomaton>(r);
  MatTable mat = automaton_to_mat(a, role);
  std::string text;
  if (o.format == "csv") {
    text = mat_to_csv(mat);
  } else if (o.format == "json") {
    text = mat_to_json(mat, p.ids());
  } else {
    text = automaton_to_text(a) + mat_to_text(mat);
  }
  write_out(o.out, text);
  return 0;
}

int cmd_compose(const CommonOpts& o, const std::vector<std::string>& roles) {
  ProtocolDef p = load_protocol(o.protocol);
  for (const auto& r : roles)
    if (!p.roles.count(r)) throw std::runtime_error("no such role: " + r);
  auto ra = synthesize_automaton(p.roles.at(roles[0]));
  auto rb = synthesize_automaton(p.roles.at(roles[1]));
  if (!std::holds_alternative<MonitorAutomaton>(ra) ||
      !std::holds_alternative<MonitorAutomaton>(rb)) {
    std::cerr << "both roles must be monitorable\n";
    return 1;
  }
  JointAutomaton j =
      compose_restrict(std::get<MonitorAutomaton>(ra), roles[0],
                       std::get<MonitorAutomaton>(rb), roles[1]);
  write_out(o.out, joint_to_text(j));
  return 0;
}

int cmd_simulate(const CommonOpts& o, const std::string& scenario_path,
                 const std::string& preset_name, const std::string& log_path) {
  Scenario sc;
  std::string name;
  if (!scenario_path.empty()) {
    sc = scenario_from_json(slurp(scenario_path));
    if (o.seed != 1) sc.seed = o.seed;
    name = sc.protocol.name;
  } else {
    Preset pr = parse_preset(preset_name);
    sc = corpus_scenario(o.protocol, pr, o.seed);
    name = sc.protocol.name + "-" + to_string(pr);
  }
  SimReport r = run_simulation(sc);
  if (!log_path.empty()) write_out(log_path, r.event_log);
  if (o.format == "text") {
    std::ostringstream s;
    s << name << ": accepted " << r.accepted << ", rejected " << r.rejected
      << ", retransmissions " << r.retransmissions << ", completed "
      << r.completed << ", stuck " << r.stuck << ", closed " << r.closed
      << "\n";
    write_out(o.out, s.str());
  } else {
    write_out(o.out, r.csv(name));
  }
  return 0;
}

int cmd_verify(const CommonOpts& o) {
  ProtocolDef p = load_protocol(o.protocol);
  Network n = make_network(p);
  Role failing;
  auto m = instrument(n, &failing);
  if (!m) {
    std::cerr << "cannot instrument: monitor rejects queue of " << failing
              << "\n";
    return 1;
  }
  ExplorationBounds b{o.queue_bound, o.max_states};
  Verdict v = internal_bisim(n, *m, b);
  std::ostringstream report;
  report << "internal bisimulation: " << (v.holds ? "holds" : "fails") << "\n";
  if (!v.holds) {
    report << "  " << v.reason << "\n";
    for (const auto& l : v.witness) report << "  " << to_string(l) << "\n";
  }
  write_out(o.out, report.str());
  return v.holds ? 0 : 1;
}

int cmd_corpus_run_all(CommonOpts o) {
  std::ostringstream csv;
  csv << "protocol,preset,accepted,rejected,retransmissions,completed,stuck,"
         "closed\n";
  bool ok = true;
  for (const auto& name : corpus_names()) {
    o.protocol = name;
    CommonOpts co = o;
    co.out = "/dev/null";
    if (cmd_check(co) != 0) {
      std::cerr << name << ": checks failed\n";
      ok = false;
    }
    for (Preset pr : {Preset::UdpCorrect, Preset::UdpFaulty,
                      Preset::TcpCorrect, Preset::TcpFaulty}) {
      SimReport r = run_simulation(corpus_scenario(name, pr, o.seed));
      csv << name << ',' << to_string(pr) << ',' << r.accepted << ','
          << r.rejected << ',' << r.retransmissions << ',' << r.completed
          << ',' << r.stuck << ',' << r.closed << "\n";
    }
  }
  write_out(o.out, csv.str());
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"session-type border monitors: synthesis, model checking, and "
               "packet-level simulation"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string role, scenario_path, preset_name, log_path;
  std::vector<std::string> roles;

  auto add_common = [&](CLI::App* c, bool needs_protocol) {
    auto* p = c->add_option("--protocol", o.protocol,
                            "corpus protocol name or protocol file");
    if (needs_protocol) p->required();
    c->add_option("--format", o.format, "text, json, or csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    c->add_option("--out", o.out, "output path (default stdout)");
    c->add_option("--queue-bound", o.queue_bound, "exploration queue bound");
    c->add_option("--max-states", o.max_states, "exploration state cap");
    c->add_option("--seed", o.seed, "simulation seed");
  };

  auto* check = app.add_subcommand("check", "validate, synthesizability, "
                                            "half-duplex and output-liveness");
  add_common(check, true);

  auto* synth = app.add_subcommand("synth", "synthesize a role's monitor "
                                            "automaton and MAT");
  add_common(synth, true);
  synth->add_option("--role", role, "role to monitor")->required();

  auto* compose = app.add_subcommand("compose", "joint monitor for two roles "
                                                "behind one entry point");
  add_common(compose, true);
  compose->add_option("--role", roles, "the two roles")
      ->required()
      ->expected(2);

  auto* simulate = app.add_subcommand("simulate", "run a packet-level "
                                                  "simulation");
  add_common(simulate, false);
  simulate->add_option("--scenario", scenario_path, "scenario file");
  simulate->add_option("--preset", preset_name,
                       "preset name (with --protocol)");
  simulate->add_option("--events", log_path, "write the event log here");

  auto* verify = app.add_subcommand("verify", "monitored network is "
                                              "equivalent to the plain one");
  add_common(verify, true);

  auto* corpus = app.add_subcommand("corpus", "corpus operations");
  auto* list = corpus->add_subcommand("list", "list corpus protocols");
  auto* run_all = corpus->add_subcommand("run-all", "check and simulate the "
                                                    "whole corpus");
  add_common(run_all, false);
  auto* export_cmd = corpus->add_subcommand("export", "write a corpus "
                                                      "protocol file");
  add_common(export_cmd, true);
  corpus->require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check(o);
    if (synth->parsed()) return cmd_synth(o, role);
    if (compose->parsed()) return cmd_compose(o, roles);
    if (simulate->parsed()) {
      if (scenario_path.empty() && (preset_name.empty() || o.protocol.empty()))
        throw std::runtime_error(
            "simulate needs --scenario or --protocol with --preset");
      return cmd_simulate(o, scenario_path, preset_name, log_path);
    }
    if (verify->parsed()) return cmd_verify(o);
    if (list->parsed()) {
      for (const auto& n : corpus_names()) std::cout << n << "\n";
      return 0;
    }
    if (run_all->parsed()) return cmd_corpus_run_all(o);
    if (export_cmd->parsed()) {
      write_out(o.out, protocol_to_json(load_protocol(o.protocol)));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
