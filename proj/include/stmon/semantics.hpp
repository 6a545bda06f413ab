#pragma once

#include "stmon/types.hpp"

namespace stmon {

// Labelled-transition semantics for single endpoints.
//
// Type transitions (no queue):
//   Out(peer, l, S): internal choice sends l(S) to peer.
//   In(peer, l, S):  external choice receives l(S) from peer.
// Configuration transitions (type + input queue):
//   Send(peer, l, S):    mirrors Out.
//   Enqueue(peer, l, S): a message from peer is appended to the queue
//                        (arbitrary; bounded by a Universe).
//   Deq(peer, l, S):     the oldest queued message from peer is consumed,
//                        provided the type is an external choice on peer
//                        with a matching branch.

enum class ActKind { Out, In, Send, Enqueue, Deq };

struct Action {
  ActKind kind;
  Role peer;  // recipient for Out/Send; sender for In/Enqueue/Deq
  Label label;
  Sort sort;
  bool operator==(const Action&) const = default;
};

std::string to_string(const Action& a);

// Removes top-level recursion: rec X. T  ->  T[rec X. T / X].
TypePtr unfold(const TypePtr& t);

std::vector<std::pair<Action, TypePtr>> type_transitions(const TypePtr& t);

// All configuration transitions. Enqueue candidates range over
// universe.roles (minus `self`, if given) x universe.messages; enqueues are
// suppressed once the queue reaches max_queue_len (< 0 = unbounded).
std::vector<std::pair<Action, EndpointConfig>> config_transitions(
    const EndpointConfig& c, const Universe& universe,
    const Role& self = "", int max_queue_len = -1);

// Structural congruence on queues: equal iff the per-sender subsequences
// (FIFO order per sender) coincide.
bool queue_equiv(const InputQueue& a, const InputQueue& b);

}  // namespace stmon
