#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <tuple>

#include "stmon/header.hpp"
#include "stmon/monitor.hpp"

namespace stmon {

// Monitor-action table compiled down to wire identifiers, ready for
// per-packet lookups at a switch. Any tuple without an entry is rejected.
struct WireMat {
  int num_states = 0;
  int guarded_role = 0;  // wire id of the monitored role
  // (state, sender id, receiver id, label id) -> next state
  std::map<std::tuple<int, int, int, int>, int> accept;
  // (state, sender id, receiver id) pairs that have at least one row; this
  // is the "receiver table" (the MAT minus its label column).
  std::set<std::tuple<int, int, int>> receiver_pairs;

  // Throws ValidationError if the table mentions a role/label absent from
  // the id map.
  static WireMat compile(const MatTable& mat, const IdMap& ids);
};

// Per-session protocol tracking for a plain (datagram) border switch: a
// packet either matches an accept row and advances the session state, or is
// rejected and dropped. Session ids are adopted on first sight.
struct CoreMonitor {
  WireMat mat;
  std::map<std::uint16_t, int> state;

  enum class Verdict { Accept, Reject };
  Verdict process(const SessionHeader& h);
};

}  // namespace stmon
