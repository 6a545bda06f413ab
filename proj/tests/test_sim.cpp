#include <doctest.h>

#include "stmon/parser.hpp"
#include "stmon/sim.hpp"

using namespace stmon;

namespace {

ProtocolDef pingpong() {
  ProtocolDef p;
  p.name = "pingpong";
  p.roles["p"] = parse_session_type("q!ping(int).q&pong(int).q!done(int).end");
  p.roles["q"] = parse_session_type("p&ping(int).p!pong(int).p&done(int).end");
  p.initiator = "p";
  return p;
}

}  // namespace

TEST_CASE("sim: datagram run of a correct protocol") {
  Scenario sc;
  sc.protocol = pingpong();
  sc.sessions.resize(3);
  SimReport r = run_simulation(sc);
  // each of the 3 messages per session is counted once, at its sender's switch
  CHECK(r.accepted == 9);
  CHECK(r.rejected == 0);
  CHECK(r.retransmissions == 0);
  CHECK(r.completed == 3);
  CHECK(r.stuck == 0);
  CHECK(r.closed == 0);
}

TEST_CASE("sim: session scripts select branches") {
  ProtocolDef p;
  p.name = "choice";
  p.roles["p"] = parse_session_type("+{q!a(int).end, q!b(int).end}");
  p.roles["q"] = parse_session_type("p&{a(int).end, b(int).end}");
  p.initiator = "p";
  Scenario sc;
  sc.protocol = p;
  SessionScript s;
  s.picks["p"] = {{"q", "b"}};
  sc.sessions = {s};
  SimReport r = run_simulation(sc);
  CHECK(r.accepted == 1);
  CHECK(r.completed == 1);
  // a label-only (wildcard recipient) pick works too
  s.picks["p"] = {{"", "a"}};
  sc.sessions = {s};
  CHECK(run_simulation(sc).completed == 1);
}

TEST_CASE("sim: datagram monitors drop deviating packets") {
  Scenario sc;
  sc.protocol = pingpong();
  sc.sessions.resize(2);
  sc.sessions[1].faulty = true;
  // p repeats "ping" where only "done" is allowed
  sc.fault = FaultSpec{"p", 1, "q", "ping", 2};
  SimReport r = run_simulation(sc);
  CHECK(r.accepted == 6);
  CHECK(r.rejected == 2);  // both bad packets, at p's own switch only
  CHECK(r.completed == 2); // the protocol itself still runs to completion
  CHECK(r.closed == 0);
}

TEST_CASE("sim: reliable transport closes a provably deviating session") {
  Scenario sc;
  sc.protocol = pingpong();
  sc.transport = TransportKind::Reliable;
  sc.sessions.resize(2);
  sc.sessions[1].faulty = true;
  sc.fault = FaultSpec{"p", 1, "q", "ping", 1};
  SimReport r = run_simulation(sc);
  // session 1 completes; session 2 is cut off after ping/pong
  CHECK(r.accepted == 5);
  CHECK(r.rejected > 0);
  CHECK(r.retransmissions == 0);
  CHECK(r.reject_and_close == 1);
  CHECK(r.completed == 1);
  CHECK(r.closed == 1);
  CHECK(r.accepts_after_close == 0);
  CHECK(r.outcomes[0] == SessionOutcome::Completed);
  CHECK(r.outcomes[1] == SessionOutcome::Closed);
}

TEST_CASE("sim: reliable transport without faults needs no retransmissions") {
  Scenario sc;
  sc.protocol = pingpong();
  sc.transport = TransportKind::Reliable;
  sc.sessions.resize(4);
  SimReport r = run_simulation(sc);
  CHECK(r.accepted == 12);
  CHECK(r.rejected == 0);
  CHECK(r.retransmissions == 0);
  CHECK(r.completed == 4);
}

TEST_CASE("sim: lossy transport recovers and stays deterministic") {
  Scenario sc;
  sc.protocol = pingpong();
  sc.transport = TransportKind::Lossy;
  sc.sessions.resize(3);
  sc.seed = 20260824;
  sc.loss_pct = 10.0;  // heavy impairments to exercise recovery paths
  sc.dup_pct = 10.0;
  SimReport a = run_simulation(sc);
  CHECK(a.completed == 3);
  CHECK(a.closed == 0);
  CHECK(a.reject_and_close == 0);
  SimReport b = run_simulation(sc);
  CHECK(a.event_log == b.event_log);
  CHECK(a.csv("x") == b.csv("x"));
  CHECK(a.accepted == b.accepted);
  CHECK(a.retransmissions == b.retransmissions);
  // a different seed draws a different trace
  sc.seed = 7;
  SimReport c = run_simulation(sc);
  CHECK(c.completed == 3);
}

TEST_CASE("sim: session id adoption binds first-seen ids to slots") {
  SessionAdopter ad;
  CHECK(ad.adopt(17) == 0);
  CHECK(ad.adopt(3) == 1);
  CHECK(ad.adopt(17) == 0);
  CHECK(ad.adopt(900) == 2);
  CHECK(ad.adopt(3) == 1);
}

TEST_CASE("sim: csv layout") {
  Scenario sc;
  sc.protocol = pingpong();
  sc.sessions.resize(1);
  SimReport r = run_simulation(sc);
  CHECK(r.csv("pingpong-demo") ==
        "scenario,sessions,accepted,rejected,retransmissions,completed,stuck,"
        "closed\npingpong-demo,1,3,0,0,1,0,0\n");
}
