#pragma once

#include "stmon/semantics.hpp"
#include "stmon/types.hpp"

namespace stmon {

// Monitor states are session-type terms: a monitor for role p tracks the
// residual protocol from p's point of view. Accepting a send steps an
// internal choice; accepting an enqueue either steps an external choice on
// the message's sender, or pushes the message past unrelated prefixes,
// pruning branches whose continuations cannot accept it.

struct DepthExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Send of label(sort) to `to`: defined iff the (unfolded) term is an
// internal choice with a matching branch; yields its continuation.
std::optional<TypePtr> accept_send(const TypePtr& m, const Role& to,
                                   const Label& label, const Sort& sort);

// Enqueue of label(sort) from `from`. Rules, on the unfolded term:
//  - external choice on `from`: matching branch -> its continuation,
//    no matching branch -> undefined;
//  - internal choice whose recipients all differ from `from`: recurse into
//    every continuation, keep the non-empty set of branches that accept
//    (with updated continuations), otherwise undefined;
//  - external choice on another role: same pruning over its branches;
//  - end: undefined.
// A term revisited along one derivation path rejects that branch (no finite
// derivation exists). Derivations deeper than max_depth throw DepthExceeded.
std::optional<TypePtr> accept_enqueue(const TypePtr& m, const Role& from,
                                      const Label& label, const Sort& sort,
                                      int max_depth = 256);

// Monitor state for a whole endpoint configuration: folds accept_enqueue
// over the queue, oldest message first. Undefined if any message rejects.
std::optional<TypePtr> monitor_queue_state(const TypePtr& t, const InputQueue& q,
                                           int max_depth = 256);

// One automaton transition guard, relative to the monitored role.
struct MonAction {
  bool is_send;  // true: AccSend (peer = recipient); false: AccEnqueue (peer = sender)
  Role peer;
  Label label;
  Sort sort;
  auto operator<=>(const MonAction&) const = default;
};

std::string to_string(const MonAction& a);

struct MonitorAutomaton {
  std::vector<TypePtr> states;  // state i is terms[i]; 0 is initial (BFS order)
  struct Trans {
    int from;
    MonAction act;
    int to;
  };
  std::vector<Trans> transitions;
};

struct Unmonitorable {
  std::string reason;
  std::string witness;  // a reachable monitor term exhibiting the blow-up
};

struct SynthLimits {
  int max_states = 10000;
  int max_accept_depth = 256;
};

// Explores reachable monitor terms breadth-first under all sends and all
// universe enqueues. Types whose monitor-term space exceeds the limits (or
// whose terms grow without bound) are reported Unmonitorable; this is a safe
// over-approximation, it never misclassifies in the other direction.
std::variant<MonitorAutomaton, Unmonitorable> synthesize_automaton(
    const TypePtr& t, const SynthLimits& limits = {},
    const Universe* universe = nullptr);

// A monitor-action table row: the wire-level view of one transition. Any
// (state, sender, receiver, label) tuple without a row is rejected.
struct MatRow {
  int state;
  Role sender;
  Role receiver;
  Label label;
  Sort sort;
  int next;
  bool operator==(const MatRow&) const = default;
};

struct MatTable {
  Role monitored;
  int num_states = 0;
  int initial = 0;
  std::vector<MatRow> rows;
};

MatTable automaton_to_mat(const MonitorAutomaton& a, const Role& monitored);

// Wire identifier assignment. Role ids 1..15 (0 invalid), label ids 0..63,
// both in sorted-name order. Throws ValidationError when the spaces are
// exceeded; exhausting the label space exactly produces a warning.
struct IdMap {
  std::map<Role, int> role_ids;
  std::map<Label, int> label_ids;
  std::vector<std::string> warnings;
};

IdMap assign_ids(const std::set<Role>& roles, const std::set<Label>& labels);

// Parallel composition of two role monitors with their mutual traffic
// restricted: a p->q message fires iff p's automaton accepts the send and
// q's accepts the enqueue (joint step); transitions involving the partner
// role otherwise are pruned; everything else interleaves.
struct JointAutomaton {
  std::vector<std::pair<int, int>> states;  // (state in a, state in b); 0 initial
  struct Trans {
    int from;
    Role sender;
    Role receiver;
    Label label;
    Sort sort;
    int to;
  };
  std::vector<Trans> transitions;
};

JointAutomaton compose_restrict(const MonitorAutomaton& a, const Role& role_a,
                                const MonitorAutomaton& b, const Role& role_b);

}  // namespace stmon
