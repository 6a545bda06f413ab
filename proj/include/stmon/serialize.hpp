#pragma once

#include <string>

#include "stmon/corpus.hpp"
#include "stmon/monitor.hpp"

namespace stmon {

// Protocol files: JSON with the per-role types in the textual DSL.
//   { "name": "...", "initiator": "...", "roles": { "Role": "<dsl>", ... } }
std::string protocol_to_json(const ProtocolDef& p);
ProtocolDef protocol_from_json(const std::string& text);

// Monitor-action tables in the three output formats.
std::string mat_to_text(const MatTable& mat);
std::string mat_to_csv(const MatTable& mat);
std::string mat_to_json(const MatTable& mat, const IdMap& ids);

// Automaton graphs as deterministic, diffable text.
std::string automaton_to_text(const MonitorAutomaton& a);
std::string joint_to_text(const JointAutomaton& a);

// Scenario files: either a preset reference
//   { "protocol": "book", "preset": "udp-faulty", "seed": 7 }
// or an explicit description
//   { "protocol": "book" | {inline protocol}, "transport": "datagram",
//     "sessions": [ { "picks": {"Role": [["To","Label"], ...]},
//                     "faulty": false }, ... ],
//     "fault": { "role": ..., "before_send_index": ..., "to": ...,
//                "label": ..., "repeat": ... },
//     "seed": 1, "loss_pct": 1.0, "dup_pct": 1.0, "max_delay_us": 100000 }
// An integer "sessions" value means that many unscripted sessions.
Scenario scenario_from_json(const std::string& text);
std::string scenario_to_json(const Scenario& sc);

}  // namespace stmon
