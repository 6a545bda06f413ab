#include <doctest.h>

#include <algorithm>
#include <chrono>

#include "stmon/monitor.hpp"
#include "stmon/parser.hpp"

using namespace stmon;

namespace {

TypePtr tp(const std::string& s) { return parse_session_type(s); }

bool same_rows(std::vector<MatRow> a, std::vector<MatRow> b) {
  auto key = [](const MatRow& r) {
    return std::tuple(r.state, r.sender, r.receiver, r.label, r.sort, r.next);
  };
  auto lt = [&](const MatRow& x, const MatRow& y) { return key(x) < key(y); };
  std::sort(a.begin(), a.end(), lt);
  std::sort(b.begin(), b.end(), lt);
  return a == b;
}

}  // namespace

TEST_CASE("monitor derivations: pushing enqueues past unrelated prefixes") {
  // A receiver with two sources: messages from r may overtake the choice on p
  // and commit it.
  TypePtr Tq = tp("p&{a(int).r&a'(int).end, b(int).r&b'(int).end}");

  auto r1 = accept_enqueue(Tq, "p", "a", "int");  // positive 1
  REQUIRE(r1);
  CHECK(equal_types(*r1, tp("r&a'(int).end")));

  auto r2 = accept_enqueue(Tq, "p", "b", "int");  // positive 2
  REQUIRE(r2);
  CHECK(equal_types(*r2, tp("r&b'(int).end")));

  auto r3 = accept_enqueue(Tq, "r", "a'", "int");  // positive 3: prunes to branch a
  REQUIRE(r3);
  CHECK(equal_types(*r3, tp("p&a(int).end")));

  auto r4 = accept_enqueue(Tq, "r", "b'", "int");  // positive 4
  REQUIRE(r4);
  CHECK(equal_types(*r4, tp("p&b(int).end")));

  // after r's a' arrived, p must follow with a; b is no longer acceptable
  auto r5 = accept_enqueue(*r3, "p", "a", "int");  // positive 5
  REQUIRE(r5);
  CHECK(equal_types(*r5, make_end()));
  CHECK_FALSE(accept_enqueue(*r3, "p", "b", "int"));  // negative 1

  // an external choice never accepts a send
  CHECK_FALSE(accept_send(Tq, "r", "a'", "int"));  // negative 2
}

TEST_CASE("monitor derivations: pruning internal choices") {
  TypePtr T = tp("+{p!a(int).q&{c(int).end, d(int).end}, p!b(int).q&d(int).end}");

  auto s1 = accept_send(T, "p", "a", "int");
  REQUIRE(s1);
  CHECK(equal_types(*s1, tp("q&{c(int).end, d(int).end}")));
  auto s2 = accept_send(T, "p", "b", "int");
  REQUIRE(s2);
  CHECK(equal_types(*s2, tp("q&d(int).end")));

  // c can only follow the a-branch: the b-branch is pruned away.
  auto e1 = accept_enqueue(T, "q", "c", "int");  // positive 6
  REQUIRE(e1);
  CHECK(equal_types(*e1, tp("p!a(int).end")));

  // d is compatible with both branches: both survive, continuations updated.
  auto e2 = accept_enqueue(T, "q", "d", "int");
  REQUIRE(e2);
  CHECK(equal_types(*e2, tp("+{p!a(int).end, p!b(int).end}")));

  // the enqueuing role must not be a recipient of the choice
  CHECK_FALSE(accept_enqueue(T, "p", "a", "int"));
}

TEST_CASE("monitor_queue_state folds the queue oldest-first") {
  TypePtr Tq = tp("p&{a(int).r&a'(int).end, b(int).r&b'(int).end}");
  auto m1 = monitor_queue_state(Tq, {{"r", "a'", "int"}, {"p", "a", "int"}});
  REQUIRE(m1);
  CHECK(equal_types(*m1, make_end()));
  // same pair but with an incompatible second message
  CHECK_FALSE(monitor_queue_state(Tq, {{"r", "a'", "int"}, {"p", "b", "int"}}));
  auto m2 = monitor_queue_state(Tq, {});
  REQUIRE(m2);
  CHECK(equal_types(*m2, Tq));
}

TEST_CASE("accept_enqueue terminates on cyclic derivations") {
  // No finite derivation pushes b past an unbounded stream of sends to p.
  TypePtr t = tp("rec X. p!a(int).X");
  CHECK_FALSE(accept_enqueue(t, "q", "b", "int"));

  // Deep but acyclic derivations hit the depth cap when it is tiny.
  TypePtr deep = tp(
      "q&a1(int).q&a2(int).q&a3(int).q&a4(int).q&a5(int).p&b(int).end");
  CHECK_THROWS_AS(accept_enqueue(deep, "p", "b", "int", 3), DepthExceeded);
  auto ok = accept_enqueue(deep, "p", "b", "int", 64);
  REQUIRE(ok);
}

TEST_CASE("golden monitor-action table for the bookstore aggregator") {
  TypePtr info = tp(
      "Client&req(int).Review!r_req(int).Details!d_req(int)."
      "Review&r_rsp(str).Details&d_rsp(str).Client!rsp(str).end");
  auto t0 = std::chrono::steady_clock::now();
  auto result = synthesize_automaton(info);
  auto elapsed = std::chrono::steady_clock::now() - t0;
  CHECK(std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count() <
        1000);
  REQUIRE(std::holds_alternative<MonitorAutomaton>(result));
  const auto& a = std::get<MonitorAutomaton>(result);
  REQUIRE(a.states.size() == 9);
  REQUIRE(a.transitions.size() == 10);
  MatTable mat = automaton_to_mat(a, "Info");
  CHECK(mat.num_states == 9);
  std::vector<MatRow> golden{
      {0, "Client", "Info", "req", "int", 1},
      {1, "Info", "Review", "r_req", "int", 2},
      {2, "Review", "Info", "r_rsp", "str", 3},
      {2, "Info", "Details", "d_req", "int", 4},
      {3, "Info", "Details", "d_req", "int", 5},
      {4, "Review", "Info", "r_rsp", "str", 5},
      {4, "Details", "Info", "d_rsp", "str", 6},
      {5, "Details", "Info", "d_rsp", "str", 7},
      {6, "Review", "Info", "r_rsp", "str", 7},
      {7, "Info", "Client", "rsp", "str", 8},
  };
  CHECK(same_rows(mat.rows, golden));
  // terminal state accepts nothing
  CHECK(equal_types(a.states[8], make_end()));
}

TEST_CASE("synthesis reports unbounded monitor growth") {
  // Each accepted out-of-order message from p adds a prefix: the monitor
  // term grows without bound.
  TypePtr t = tp("rec X. q&a(int).p&b(int).X");
  auto m = t;
  std::size_t prev = term_size(m);
  for (int i = 0; i < 5; ++i) {
    auto next = accept_enqueue(m, "p", "b", "int");
    REQUIRE(next);
    CHECK(term_size(*next) > prev);
    prev = term_size(*next);
    m = *next;
  }
  auto t0 = std::chrono::steady_clock::now();
  auto result = synthesize_automaton(t);
  auto elapsed = std::chrono::steady_clock::now() - t0;
  REQUIRE(std::holds_alternative<Unmonitorable>(result));
  CHECK_FALSE(std::get<Unmonitorable>(result).witness.empty());
  CHECK(std::chrono::duration_cast<std::chrono::seconds>(elapsed).count() < 5);
}

TEST_CASE("recursive types synthesize finite automata") {
  TypePtr t = tp("rec X. +{q!req(int).q&rsp(int).X, q!quit(int).end}");
  auto result = synthesize_automaton(t);
  REQUIRE(std::holds_alternative<MonitorAutomaton>(result));
  const auto& a = std::get<MonitorAutomaton>(result);
  CHECK(a.states.size() >= 3);
  CHECK(a.states.size() < 20);
  // every state is reachable and every transition well-formed
  for (const auto& tr : a.transitions) {
    CHECK(tr.from >= 0);
    CHECK(tr.from < static_cast<int>(a.states.size()));
    CHECK(tr.to >= 0);
    CHECK(tr.to < static_cast<int>(a.states.size()));
  }
}

TEST_CASE("assign_ids: ranges, ordering, limits") {
  std::set<Role> roles{"b", "a", "c"};
  std::set<Label> labels{"y", "x"};
  IdMap m = assign_ids(roles, labels);
  CHECK(m.role_ids == std::map<Role, int>{{"a", 1}, {"b", 2}, {"c", 3}});
  CHECK(m.label_ids == std::map<Label, int>{{"x", 0}, {"y", 1}});
  CHECK(m.warnings.empty());

  std::set<Role> many_roles;
  for (int i = 0; i < 16; ++i) many_roles.insert("r" + std::to_string(i));
  CHECK_THROWS_AS(assign_ids(many_roles, labels), ValidationError);

  std::set<Label> l63, l64, l65;
  for (int i = 0; i < 65; ++i) {
    std::string l = "l" + std::to_string(i);
    if (i < 63) l63.insert(l);
    if (i < 64) l64.insert(l);
    l65.insert(l);
  }
  CHECK(assign_ids(roles, l63).warnings.empty());
  CHECK_FALSE(assign_ids(roles, l64).warnings.empty());
  CHECK_THROWS_AS(assign_ids(roles, l65), ValidationError);
}

namespace {

// Independent oracle for compose_restrict: depth-first product construction
// over explicit pair states, keyed by the role-explicit action.
using Edge = std::tuple<std::pair<int, int>, std::tuple<Role, Role, Label, Sort>,
                        std::pair<int, int>>;

std::set<Edge> naive_product(const MonitorAutomaton& a, const Role& ra,
                             const MonitorAutomaton& b, const Role& rb) {
  auto view = [](const MonAction& act, const Role& self)
      -> std::tuple<Role, Role, Label, Sort> {
    if (act.is_send) return {self, act.peer, act.label, act.sort};
    return {act.peer, self, act.label, act.sort};
  };
  std::set<Edge> edges;
  std::set<std::pair<int, int>> seen;
  std::vector<std::pair<int, int>> stack{{0, 0}};
  seen.insert({0, 0});
  while (!stack.empty()) {
    auto [sa, sb] = stack.back();
    stack.pop_back();
    auto push = [&](std::pair<int, int> p) {
      if (seen.insert(p).second) stack.push_back(p);
    };
    for (const auto& ta : a.transitions) {
      if (ta.from != sa) continue;
      if (ta.act.peer == rb) {
        for (const auto& tb : b.transitions) {
          if (tb.from != sb || tb.act.peer != ra) continue;
          if (ta.act.is_send == tb.act.is_send) continue;
          if (view(ta.act, ra) != view(tb.act, rb)) continue;
          edges.insert({{sa, sb}, view(ta.act, ra), {ta.to, tb.to}});
          push({ta.to, tb.to});
        }
      } else {
        edges.insert({{sa, sb}, view(ta.act, ra), {ta.to, sb}});
        push({ta.to, sb});
      }
    }
    for (const auto& tb : b.transitions) {
      if (tb.from != sb || tb.act.peer == ra) continue;
      edges.insert({{sa, sb}, view(tb.act, rb), {sa, tb.to}});
      push({sa, tb.to});
    }
  }
  return edges;
}

std::set<Edge> joint_edges(const JointAutomaton& j) {
  std::set<Edge> edges;
  for (const auto& t : j.transitions)
    edges.insert({j.states[static_cast<std::size_t>(t.from)],
                  {t.sender, t.receiver, t.label, t.sort},
                  j.states[static_cast<std::size_t>(t.to)]});
  return edges;
}

}  // namespace

TEST_CASE("compose_restrict agrees with the naive product oracle") {
  auto synth = [](const std::string& s) {
    auto r = synthesize_automaton(parse_session_type(s));
    REQUIRE(std::holds_alternative<MonitorAutomaton>(r));
    return std::get<MonitorAutomaton>(r);
  };

  SUBCASE("aggregator composed with its client") {
    MonitorAutomaton info = synth(
        "Client&req(int).Review!r_req(int).Details!d_req(int)."
        "Review&r_rsp(str).Details&d_rsp(str).Client!rsp(str).end");
    MonitorAutomaton client = synth("Info!req(int).Info&rsp(str).end");
    JointAutomaton j = compose_restrict(info, "Info", client, "Client");
    CHECK(joint_edges(j) == naive_product(info, "Info", client, "Client"));
    CHECK(j.states.size() >= 9);
    // the restricted pair still starts with the client's request
    bool has_req = false;
    for (const auto& t : j.transitions)
      if (t.from == 0 && t.sender == "Client" && t.receiver == "Info" &&
          t.label == "req")
        has_req = true;
    CHECK(has_req);
  }

  SUBCASE("recursive ping-pong pair") {
    MonitorAutomaton p = synth("rec X. +{q!ping(int).q&pong(int).X, q!bye(int).end}");
    MonitorAutomaton q = synth("rec X. p&{ping(int).p!pong(int).X, bye(int).end}");
    JointAutomaton j = compose_restrict(p, "p", q, "q");
    CHECK(joint_edges(j) == naive_product(p, "p", q, "q"));
    CHECK(!j.transitions.empty());
  }

  SUBCASE("mismatched pair composes to no mutual traffic") {
    MonitorAutomaton p = synth("q!a(int).end");
    MonitorAutomaton q = synth("p&b(int).end");
    JointAutomaton j = compose_restrict(p, "p", q, "q");
    CHECK(joint_edges(j) == naive_product(p, "p", q, "q"));
    CHECK(j.transitions.empty());
  }
}
