#include "stmon/monitor.hpp"

#include <deque>
#include <unordered_map>
#include <unordered_set>

namespace stmon {

std::optional<TypePtr> accept_send(const TypePtr& m, const Role& to,
                                   const Label& label, const Sort& sort) {
  TypePtr u = unfold(m);
  if (const auto* ic = std::get_if<IntChoice>(&u->node)) {
    for (const auto& b : ic->branches)
      if (b.to == to && b.label == label && b.sort == sort) return b.cont;
  }
  return std::nullopt;
}

namespace {

std::optional<TypePtr> accept_enqueue_rec(const TypePtr& m, const Role& from,
                                          const Label& label, const Sort& sort,
                                          std::unordered_set<std::string>& path,
                                          int depth, int max_depth) {
  if (depth > max_depth)
    throw DepthExceeded("accept_enqueue derivation exceeded depth " +
                        std::to_string(max_depth));
  TypePtr u = unfold(m);
  std::string key = canonical(u);
  if (!path.insert(key).second) return std::nullopt;  // cyclic derivation
  std::optional<TypePtr> result;

  if (const auto* ec = std::get_if<ExtChoice>(&u->node)) {
    if (ec->from == from) {
      for (const auto& b : ec->branches)
        if (b.label == label && b.sort == sort) {
          result = b.cont;
          break;
        }
    } else {
      // Push the message past an unrelated external choice, pruning branches
      // whose continuations cannot accept it.
      std::vector<RecvBranch> kept;
      for (const auto& b : ec->branches) {
        auto r = accept_enqueue_rec(b.cont, from, label, sort, path, depth + 1,
                                    max_depth);
        if (r) kept.push_back({b.label, b.sort, *r});
      }
      if (!kept.empty()) result = make_ext_choice(ec->from, std::move(kept));
    }
  } else if (const auto* ic = std::get_if<IntChoice>(&u->node)) {
    // Only applicable when the enqueuing role is not a recipient of any
    // branch (otherwise the send/receive order with that role matters).
    bool applicable = true;
    for (const auto& b : ic->branches)
      if (b.to == from) {
        applicable = false;
        break;
      }
    if (applicable) {
      std::vector<SendBranch> kept;
      for (const auto& b : ic->branches) {
        auto r = accept_enqueue_rec(b.cont, from, label, sort, path, depth + 1,
                                    max_depth);
        if (r) kept.push_back({b.to, b.label, b.sort, *r});
      }
      if (!kept.empty()) result = make_int_choice(std::move(kept));
    }
  }
  // EndType: undefined.

  path.erase(key);
  return result;
}

}  // namespace

std::optional<TypePtr> accept_enqueue(const TypePtr& m, const Role& from,
                                      const Label& label, const Sort& sort,
                                      int max_depth) {
  std::unordered_set<std::string> path;
  return accept_enqueue_rec(m, from, label, sort, path, 0, max_depth);
}

std::optional<TypePtr> monitor_queue_state(const TypePtr& t, const InputQueue& q,
                                           int max_depth) {
  std::optional<TypePtr> m = t;
  for (const auto& msg : q) {
    m = accept_enqueue(*m, msg.sender, msg.label, msg.sort, max_depth);
    if (!m) return std::nullopt;
  }
  return m;
}

std::string to_string(const MonAction& a) {
  return std::string(a.is_send ? "send" : "enq") + "(" + a.peer + "," + a.label +
         "," + a.sort + ")";
}

std::variant<MonitorAutomaton, Unmonitorable> synthesize_automaton(
    const TypePtr& t, const SynthLimits& limits, const Universe* universe) {
  Universe own;
  if (!universe) {
    own = Universe::from_types({t});
    universe = &own;
  }
  const std::size_t size_guard =
      std::max<std::size_t>(1024, 64 * term_size(t));

  MonitorAutomaton a;
  std::unordered_map<std::string, int> index;
  std::deque<int> work;
  a.states.push_back(t);
  index.emplace(canonical(t), 0);
  work.push_back(0);

  auto intern = [&](const TypePtr& m) -> std::variant<int, Unmonitorable> {
    std::string key = canonical(m);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    if (term_size(m) > size_guard)
      return Unmonitorable{"monitor term grows without bound", to_string(m)};
    if (static_cast<int>(a.states.size()) >= limits.max_states)
      return Unmonitorable{"monitor state space exceeds " +
                               std::to_string(limits.max_states) + " states",
                           to_string(m)};
    int id = static_cast<int>(a.states.size());
    a.states.push_back(m);
    index.emplace(std::move(key), id);
    work.push_back(id);
    return id;
  };

  while (!work.empty()) {
    int s = work.front();
    work.pop_front();
    TypePtr m = a.states[static_cast<std::size_t>(s)];

    for (const auto& from : universe->roles) {
      for (const auto& [label, sort] : universe->messages) {
        std::optional<TypePtr> next;
        try {
          next = accept_enqueue(m, from, label, sort, limits.max_accept_depth);
        } catch (const DepthExceeded&) {
          return Unmonitorable{"accept_enqueue derivation exceeds depth " +
                                   std::to_string(limits.max_accept_depth),
                               to_string(m)};
        }
        if (!next) continue;
        auto r = intern(*next);
        if (auto* um = std::get_if<Unmonitorable>(&r)) return *um;
        a.transitions.push_back(
            {s, {false, from, label, sort}, std::get<int>(r)});
      }
    }
    TypePtr u = unfold(m);
    if (const auto* ic = std::get_if<IntChoice>(&u->node)) {
      for (const auto& b : ic->branches) {
        auto r = intern(b.cont);
        if (auto* um = std::get_if<Unmonitorable>(&r)) return *um;
        a.transitions.push_back(
            {s, {true, b.to, b.label, b.sort}, std::get<int>(r)});
      }
    }
  }
  return a;
}

MatTable automaton_to_mat(const MonitorAutomaton& a, const Role& monitored) {
  MatTable t;
  t.monitored = monitored;
  t.num_states = static_cast<int>(a.states.size());
  t.initial = 0;
  for (const auto& tr : a.transitions) {
    MatRow row;
    row.state = tr.from;
    row.next = tr.to;
    row.label = tr.act.label;
    row.sort = tr.act.sort;
    if (tr.act.is_send) {
      row.sender = monitored;
      row.receiver = tr.act.peer;
    } else {
      row.sender = tr.act.peer;
      row.receiver = monitored;
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

IdMap assign_ids(const std::set<Role>& roles, const std::set<Label>& labels) {
  if (static_cast<int>(roles.size()) > kMaxRoles)
    throw ValidationError("too many roles: " + std::to_string(roles.size()) +
                          " (max " + std::to_string(kMaxRoles) + ")");
  if (static_cast<int>(labels.size()) > kMaxLabels)
    throw ValidationError("too many labels: " + std::to_string(labels.size()) +
                          " (max " + std::to_string(kMaxLabels) + ")");
  IdMap m;
  int rid = 1;
  for (const auto& r : roles) m.role_ids[r] = rid++;
  int lid = 0;
  for (const auto& l : labels) m.label_ids[l] = lid++;
  if (static_cast<int>(labels.size()) == kMaxLabels)
    m.warnings.push_back("label id space exhausted (64 labels in use)");
  return m;
}

namespace {

struct NetActionKey {
  Role sender;
  Role receiver;
  Label label;
  Sort sort;
  bool operator==(const NetActionKey&) const = default;
};

// Role-explicit view of a single-role automaton transition.
NetActionKey net_view(const MonAction& act, const Role& self) {
  if (act.is_send) return {self, act.peer, act.label, act.sort};
  return {act.peer, self, act.label, act.sort};
}

}  // namespace

JointAutomaton compose_restrict(const MonitorAutomaton& a, const Role& role_a,
                                const MonitorAutomaton& b, const Role& role_b) {
  // Outgoing transitions indexed per state for both automata.
  std::vector<std::vector<const MonitorAutomaton::Trans*>> a_out(a.states.size()),
      b_out(b.states.size());
  for (const auto& t : a.transitions)
    a_out[static_cast<std::size_t>(t.from)].push_back(&t);
  for (const auto& t : b.transitions)
    b_out[static_cast<std::size_t>(t.from)].push_back(&t);

  JointAutomaton j;
  std::map<std::pair<int, int>, int> index;
  std::deque<int> work;
  j.states.push_back({0, 0});
  index[{0, 0}] = 0;
  work.push_back(0);

  auto intern = [&](int sa, int sb) {
    auto [it, fresh] = index.try_emplace({sa, sb},
                                         static_cast<int>(j.states.size()));
    if (fresh) {
      j.states.push_back({sa, sb});
      work.push_back(it->second);
    }
    return it->second;
  };

  while (!work.empty()) {
    int s = work.front();
    work.pop_front();
    auto [sa, sb] = j.states[static_cast<std::size_t>(s)];
    for (const auto* ta : a_out[static_cast<std::size_t>(sa)]) {
      NetActionKey ka = net_view(ta->act, role_a);
      if (ta->act.peer == role_b) {
        // Mutual traffic: must synchronize with a matching step of b.
        for (const auto* tb : b_out[static_cast<std::size_t>(sb)]) {
          if (tb->act.peer != role_a) continue;
          if (net_view(tb->act, role_b) != ka) continue;
          if (ta->act.is_send == tb->act.is_send) continue;  // need send+enqueue
          j.transitions.push_back({s, ka.sender, ka.receiver, ka.label, ka.sort,
                                   intern(ta->to, tb->to)});
        }
      } else {
        j.transitions.push_back({s, ka.sender, ka.receiver, ka.label, ka.sort,
                                 intern(ta->to, sb)});
      }
    }
    for (const auto* tb : b_out[static_cast<std::size_t>(sb)]) {
      if (tb->act.peer == role_a) continue;  // handled above (or pruned)
      NetActionKey kb = net_view(tb->act, role_b);
      j.transitions.push_back({s, kb.sender, kb.receiver, kb.label, kb.sort,
                               intern(sa, tb->to)});
    }
  }
  return j;
}

}  // namespace stmon
