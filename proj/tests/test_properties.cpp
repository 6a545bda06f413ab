#include <doctest.h>

#include <random>

#include "stmon/corpus.hpp"
#include "stmon/monitor.hpp"
#include "stmon/parser.hpp"
#include "stmon/semantics.hpp"

using namespace stmon;

namespace {

const std::vector<Role> kRoles = {"p", "q", "r"};
const std::vector<Label> kLabels = {"a", "b", "c", "d"};
const std::vector<Sort> kSorts = {"int", "str"};

// Random closed, guarded session type. `guarded` tracks whether at least one
// prefix separates us from the nearest enclosing binder.
TypePtr rand_type(std::mt19937_64& rng, int depth,
                  std::vector<std::string>& binders, bool guarded) {
  auto role = [&] { return kRoles[rng() % kRoles.size()]; };
  auto sort = [&] { return kSorts[rng() % kSorts.size()]; };
  std::uint64_t k = rng() % 10;
  if (depth <= 0 || k < 2) {
    if (guarded && !binders.empty() && k == 0)
      return make_var(binders[rng() % binders.size()]);
    return make_end();
  }
  if (k < 3 && !guarded) {  // rec directly around another rec is pointless
    binders.push_back("X" + std::to_string(binders.size()));
    TypePtr body = rand_type(rng, depth - 1, binders, false);
    std::string var = binders.back();
    binders.pop_back();
    return make_rec(var, body);
  }
  std::size_t width = 1 + rng() % 2;
  if (k < 7) {
    std::vector<SendBranch> bs;
    while (bs.size() < width) {
      SendBranch b{role(), kLabels[rng() % kLabels.size()], sort(), nullptr};
      bool dup = false;
      for (const auto& o : bs)
        if (o.to == b.to && o.label == b.label) dup = true;
      if (dup) continue;
      b.cont = rand_type(rng, depth - 1, binders, true);
      bs.push_back(std::move(b));
    }
    return make_int_choice(std::move(bs));
  }
  Role from = role();
  std::vector<RecvBranch> bs;
  while (bs.size() < width) {
    RecvBranch b{kLabels[rng() % kLabels.size()], sort(), nullptr};
    bool dup = false;
    for (const auto& o : bs)
      if (o.label == b.label) dup = true;
    if (dup) continue;
    b.cont = rand_type(rng, depth - 1, binders, true);
    bs.push_back(std::move(b));
  }
  return make_ext_choice(from, std::move(bs));
}

TypePtr rand_valid_type(std::mt19937_64& rng) {
  for (;;) {
    std::vector<std::string> binders;
    TypePtr t = rand_type(rng, 4, binders, false);
    try {
      validate(t);
      return t;
    } catch (const ValidationError&) {
    }
  }
}

InputQueue rand_queue(std::mt19937_64& rng, std::size_t len) {
  InputQueue q;
  for (std::size_t i = 0; i < len; ++i)
    q.push_back({kRoles[rng() % kRoles.size()],
                 kLabels[rng() % kLabels.size()],
                 kSorts[rng() % kSorts.size()]});
  return q;
}

// Random different-sender adjacent swaps: stays within the congruence class.
InputQueue shuffle_equiv(std::mt19937_64& rng, InputQueue q, int swaps) {
  for (int i = 0; i < swaps && q.size() > 1; ++i) {
    std::size_t j = rng() % (q.size() - 1);
    if (q[j].sender != q[j + 1].sender) std::swap(q[j], q[j + 1]);
  }
  return q;
}

std::optional<TypePtr> queue_state_or_nothing(const TypePtr& t,
                                              const InputQueue& q) {
  try {
    return monitor_queue_state(t, q, 64);
  } catch (const DepthExceeded&) {
    return std::nullopt;  // treated like rejection for comparison purposes
  }
}

std::vector<TypePtr> corpus_types() {
  std::vector<TypePtr> ts;
  for (const auto& name : corpus_names())
    for (const auto& [role, t] : corpus_protocol(name).roles) ts.push_back(t);
  return ts;
}

}  // namespace

TEST_CASE("property: monitor_queue_state is queue-congruence invariant") {
  std::mt19937_64 rng(811);
  int defined = 0;
  for (int i = 0; i < 10000; ++i) {
    TypePtr t = rand_valid_type(rng);
    InputQueue q = rand_queue(rng, rng() % 6);
    InputQueue q2 = shuffle_equiv(rng, q, 5);
    REQUIRE(queue_equiv(q, q2));
    auto a = queue_state_or_nothing(t, q);
    auto b = queue_state_or_nothing(t, q2);
    REQUIRE(a.has_value() == b.has_value());
    if (a) {
      ++defined;
      REQUIRE(equal_types(*a, *b));
    }
  }
  CHECK(defined > 100);  // the generator must exercise the accepting side too
}

TEST_CASE("property: the automaton mirrors every session-LTS walk") {
  std::mt19937_64 rng(812);
  for (const TypePtr& t : corpus_types()) {
    auto synth = synthesize_automaton(t);
    REQUIRE(std::holds_alternative<MonitorAutomaton>(synth));
    const auto& a = std::get<MonitorAutomaton>(synth);
    std::map<std::pair<int, MonAction>, int> edges;
    for (const auto& tr : a.transitions) {
      auto key = std::make_pair(tr.from, tr.act);
      REQUIRE(edges.emplace(key, tr.to).second);  // deterministic
    }
    for (int walk = 0; walk < 1000; ++walk) {
      TypePtr cur = t;
      int state = 0;
      for (int step = 0; step < 40; ++step) {
        auto nexts = type_transitions(cur);
        if (nexts.empty()) break;
        const auto& [act, cont] = nexts[rng() % nexts.size()];
        MonAction ma{act.kind == ActKind::Out, act.peer, act.label, act.sort};
        auto it = edges.find({state, ma});
        REQUIRE(it != edges.end());
        state = it->second;
        REQUIRE(equal_types(a.states[static_cast<std::size_t>(state)], cont));
        cur = cont;
      }
    }
  }
}

TEST_CASE("property: accept_send is exactly the internal-choice step") {
  std::mt19937_64 rng(813);
  for (int i = 0; i < 3000; ++i) {
    TypePtr t = rand_valid_type(rng);
    // collected Out actions of the unfolded term
    std::map<std::tuple<Role, Label, Sort>, TypePtr> outs;
    for (const auto& [act, cont] : type_transitions(t))
      if (act.kind == ActKind::Out)
        outs.emplace(std::make_tuple(act.peer, act.label, act.sort), cont);
    // every Out action is accepted with the same continuation
    for (const auto& [key, cont] : outs) {
      auto r = accept_send(t, std::get<0>(key), std::get<1>(key),
                           std::get<2>(key));
      REQUIRE(r);
      REQUIRE(equal_types(*r, cont));
    }
    // any other (peer, label, sort) triple is rejected
    for (int probe = 0; probe < 4; ++probe) {
      Role to = kRoles[rng() % kRoles.size()];
      Label l = kLabels[rng() % kLabels.size()];
      Sort s = kSorts[rng() % kSorts.size()];
      auto r = accept_send(t, to, l, s);
      auto it = outs.find(std::make_tuple(to, l, s));
      REQUIRE(r.has_value() == (it != outs.end()));
    }
  }
}

TEST_CASE("property: enqueue then matching dequeue restores the queue") {
  std::mt19937_64 rng(814);
  int exercised = 0;
  for (int i = 0; i < 3000; ++i) {
    TypePtr t = rand_valid_type(rng);
    TypePtr u = unfold(t);
    const auto* ec = std::get_if<ExtChoice>(&u->node);
    if (!ec) continue;
    const RecvBranch& br = ec->branches[rng() % ec->branches.size()];
    EndpointConfig c{t, rand_queue(rng, rng() % 3)};
    // drop queued messages from the choice's sender so ours becomes oldest
    std::erase_if(c.queue,
                  [&](const QueuedMsg& m) { return m.sender == ec->from; });
    EndpointConfig after = c;
    after.queue.push_back({ec->from, br.label, br.sort});
    Universe uni;
    uni.roles = {kRoles.begin(), kRoles.end()};
    bool found = false;
    for (const auto& [act, next] : config_transitions(after, uni)) {
      if (act.kind != ActKind::Deq || act.peer != ec->from ||
          act.label != br.label)
        continue;
      found = true;
      ++exercised;
      CHECK(queue_equiv(next.queue, c.queue));
      CHECK(equal_types(next.type, br.cont));
    }
    REQUIRE(found);
  }
  CHECK(exercised > 100);
}

TEST_CASE("property: dequeues only ever take an oldest-from-sender message") {
  std::mt19937_64 rng(815);
  Universe uni;
  uni.roles = {kRoles.begin(), kRoles.end()};
  for (int i = 0; i < 3000; ++i) {
    EndpointConfig c{rand_valid_type(rng), rand_queue(rng, 1 + rng() % 5)};
    for (const auto& [act, next] : config_transitions(c, uni)) {
      if (act.kind != ActKind::Deq) continue;
      // the consumed message must be the first of its sender in the queue
      auto first = std::find_if(c.queue.begin(), c.queue.end(),
                                [&](const QueuedMsg& m) {
                                  return m.sender == act.peer;
                                });
      REQUIRE(first != c.queue.end());
      CHECK(first->label == act.label);
      CHECK(first->sort == act.sort);
    }
  }
}
