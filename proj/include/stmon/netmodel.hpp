#pragma once

#include "stmon/monitor.hpp"
#include "stmon/semantics.hpp"
#include "stmon/types.hpp"

namespace stmon {

// Closed networks of endpoints and their monitored counterparts, explored as
// finite LTSs under a queue bound. Observable steps:
//   Comm(p -> q, l(S)): p's type sends, the message lands in q's queue.
//   Deq(q <- p, l(S)):  q consumes the oldest queued message from p.
// In the monitored network a Comm additionally requires the sender's monitor
// to accept the send and the receiver's monitor to accept the enqueue; both
// monitors advance atomically with the step. Deq leaves monitors unchanged.

struct Network {
  std::map<Role, EndpointConfig> endpoints;
};

struct MonitoredEndpoint {
  EndpointConfig config;
  TypePtr monitor;
};

struct MonitoredNetwork {
  std::map<Role, MonitoredEndpoint> endpoints;
};

struct NetLabel {
  enum class Kind { Comm, Deq } kind;
  Role sender;    // message origin
  Role receiver;  // message destination (the dequeuing role for Deq)
  Label label;
  Sort sort;
  bool operator==(const NetLabel&) const = default;
};

std::string to_string(const NetLabel& l);

struct ExplorationBounds {
  // Cap on in-flight messages per (sender, recipient) pair; keeps every LTS
  // finite without starving multi-client servers behind a shared queue.
  int max_queue_len = 4;
  long max_states = 200000;
};

struct StateBoundExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::pair<NetLabel, Network>> net_step(const Network& n,
                                                   const ExplorationBounds& b);

std::vector<std::pair<NetLabel, MonitoredNetwork>> mnet_step(
    const MonitoredNetwork& n, const ExplorationBounds& b,
    int max_accept_depth = 256);

// Attaches a monitor to every endpoint: the monitor state is the fold of the
// endpoint's queue over its type. Returns nothing (and reports the failing
// role) if some queue is not accepted.
std::optional<MonitoredNetwork> instrument(const Network& n,
                                           Role* failing = nullptr);

struct Verdict {
  bool holds = false;
  std::vector<NetLabel> witness;  // replayable path from the initial state
  std::string reason;
};

// Half-duplex: in every reachable state, for every role pair {p, q}, at most
// one direction of the pair's channel is non-empty.
Verdict check_half_duplex(const Network& n, const ExplorationBounds& b);

// Bounded output-liveness (conservative): fails if some reachable state
// holds a message that can never be dequeued (backward reachability), or if
// a fair cycle starves a held message (an SCC avoiding that Deq in which
// every label enabled anywhere in the SCC is taken inside it). Reported
// counterexamples are genuine; exotic violations may be missed.
Verdict check_output_live(const Network& n, const ExplorationBounds& b);

// Weak-equivalence of the network and its monitored counterpart over Comm
// and Deq labels (both LTSs are already tau-free): signature-based partition
// refinement over the disjoint union, with a distinguishing trace on failure.
Verdict internal_bisim(const Network& n, const MonitoredNetwork& m,
                       const ExplorationBounds& b);

}  // namespace stmon
