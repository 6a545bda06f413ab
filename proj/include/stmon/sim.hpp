#pragma once

#include <cstdint>
#include <optional>

#include "stmon/tcpmon.hpp"
#include "stmon/types.hpp"

namespace stmon {

// A deployable protocol: one local type per role.
struct ProtocolDef {
  std::string name;
  std::map<Role, TypePtr> roles;
  Role initiator;  // role whose first message opens a session

  std::set<Role> role_names() const;
  std::set<Label> label_names() const;
  std::map<Label, Sort> label_sorts() const;  // throws if a label is ambiguous
  IdMap ids() const;
};

// A scripted protocol deviation: just before the faulty role's
// `before_send_index`-th send (0-based, counting its own protocol sends), it
// emits `repeat` copies of an out-of-protocol message first.
struct FaultSpec {
  Role role;
  int before_send_index = 0;
  Role to;
  Label label;
  int repeat = 1;
};

// Per-session branch decisions: for every internal choice with more than one
// branch, the role consumes the next entry. An empty role in the pick
// matches any recipient (label-only pick).
struct SessionScript {
  std::map<Role, std::vector<std::pair<Role, Label>>> picks;
  bool faulty = false;
};

enum class TransportKind {
  Datagram,  // fire-and-forget, fixed delays, per-session protocol monitors
  Reliable,  // acknowledged + retransmitting transport, no impairments
  Lossy,     // acknowledged transport over a lossy/duplicating/delaying net
};

struct Scenario {
  ProtocolDef protocol;
  TransportKind transport = TransportKind::Datagram;
  std::vector<SessionScript> sessions;
  std::optional<FaultSpec> fault;  // applies to sessions marked faulty
  std::uint64_t seed = 1;
  // impairment knobs, used by Lossy only
  double loss_pct = 1.0;
  double dup_pct = 1.0;
  long max_delay_us = 100000;
};

enum class SessionOutcome { Completed, Stuck, Closed };

struct SimReport {
  long accepted = 0;
  long rejected = 0;
  long retransmissions = 0;
  long reject_and_close = 0;  // count of RejectAndClose verdicts
  std::vector<SessionOutcome> outcomes;
  long completed = 0, stuck = 0, closed = 0;
  // Accept verdicts observed for a session at the monitor that closed it,
  // after the close. The containment property says this stays zero.
  long accepts_after_close = 0;
  std::string event_log;
  std::string csv(const std::string& scenario_name) const;
};

// Runs the scenario to quiescence. Deterministic: equal scenarios and seeds
// produce byte-identical reports (including the event log).
SimReport run_simulation(const Scenario& sc);

// First-unseen-binds session id adoption, as performed by monitors and entry
// points that learn ids from traffic.
struct SessionAdopter {
  std::map<std::uint16_t, int> bound;
  int next_slot = 0;
  int adopt(std::uint16_t sid);
};

}  // namespace stmon
