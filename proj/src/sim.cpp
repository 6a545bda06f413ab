#include "stmon/sim.hpp"

#include <functional>
#include <random>
#include <sstream>

#include "stmon/semantics.hpp"

namespace stmon {

std::set<Role> ProtocolDef::role_names() const {
  std::set<Role> rs;
  for (const auto& [r, t] : roles) {
    rs.insert(r);
    for (const auto& x : roles_of(t)) rs.insert(x);
  }
  return rs;
}

std::set<Label> ProtocolDef::label_names() const {
  std::set<Label> ls;
  for (const auto& [r, t] : roles)
    for (const auto& [l, s] : messages_of(t)) ls.insert(l);
  return ls;
}

std::map<Label, Sort> ProtocolDef::label_sorts() const {
  std::map<Label, Sort> m;
  for (const auto& [r, t] : roles)
    for (const auto& [l, s] : messages_of(t)) {
      auto [it, fresh] = m.try_emplace(l, s);
      if (!fresh && it->second != s)
        throw ValidationError("label " + l + " used with two sorts");
    }
  return m;
}

IdMap ProtocolDef::ids() const { return assign_ids(role_names(), label_names()); }

int SessionAdopter::adopt(std::uint16_t sid) {
  auto [it, fresh] = bound.try_emplace(sid, next_slot);
  if (fresh) ++next_slot;
  return it->second;
}

namespace {

constexpr long kHopUs = 500;           // each link hop
constexpr long kStaggerUs = 5000;      // session start spacing
constexpr long kInitialRtoUs = 200000; // first retransmission timeout
constexpr int kMaxRetries = 5;

struct Packet {
  SessionHeader hdr;
  Role from, to;  // host roles
  bool is_control = false;
  std::uint64_t tseq = 0;      // per-connection transport sequence (data)
  std::uint64_t ack_tseq = 0;  // acknowledged tseq (control)
};

struct Engine {
  TypePtr type;
  InputQueue buf;
  std::vector<std::pair<Role, Label>> picks;
  std::size_t pick_i = 0;
  int sends_done = 0;
  std::uint16_t next_ssn = 0;
  bool fault_pending = false;
  bool done = false;
  bool blocked = false;  // oldest message from the expected sender mismatched
};

struct Pending {
  Packet pkt;
  int tries = 0;
};

struct Conn {
  std::uint64_t next_tseq = 1;
  std::map<std::uint64_t, Pending> unacked;
  std::uint64_t next_in = 1;
  std::map<std::uint64_t, Packet> reorder;
};

struct Host {
  Role role;
  int role_id = 0;
  std::vector<Engine> engines;
  // one connection per (peer, session): each session runs over its own
  // transport connection, so sessions do not stall one another
  std::map<std::pair<Role, std::uint16_t>, Conn> conns;
};

class Simulator {
 public:
  explicit Simulator(const Scenario& sc) : sc_(sc), rng_(sc.seed) {
    ids_ = sc_.protocol.ids();
    sorts_ = sc_.protocol.label_sorts();
    for (const auto& [l, id] : ids_.label_ids) label_of_id_[id] = l;

    const bool tcp = sc_.transport != TransportKind::Datagram;
    for (const auto& [role, type] : sc_.protocol.roles) {
      int h = static_cast<int>(hosts_.size());
      host_of_role_[role] = h;
      hosts_.push_back({});
      Host& host = hosts_.back();
      host.role = role;
      host.role_id = ids_.role_ids.at(role);
      auto synth = synthesize_automaton(type);
      if (!std::holds_alternative<MonitorAutomaton>(synth))
        throw ValidationError("role " + role + " is not monitorable");
      MatTable mat = automaton_to_mat(std::get<MonitorAutomaton>(synth), role);
      WireMat wm = WireMat::compile(mat, ids_);
      if (tcp) {
        tcp_mons_.push_back({wm, {}, {}, {}});
        core_mons_.push_back({});
      } else {
        core_mons_.push_back({wm, {}});
        tcp_mons_.push_back({});
      }
      for (std::size_t i = 0; i < sc_.sessions.size(); ++i) {
        Engine e;
        e.type = type;
        const SessionScript& script = sc_.sessions[i];
        auto pit = script.picks.find(role);
        if (pit != script.picks.end()) e.picks = pit->second;
        e.fault_pending =
            script.faulty && sc_.fault && sc_.fault->role == role;
        host.engines.push_back(std::move(e));
      }
    }
  }

  SimReport run() {
    for (std::size_t i = 0; i < sc_.sessions.size(); ++i) {
      long t0 = static_cast<long>(i) * kStaggerUs;
      for (std::size_t h = 0; h < hosts_.size(); ++h)
        at(t0, [this, h, i] { run_engine(static_cast<int>(h), static_cast<int>(i)); });
    }
    while (!events_.empty()) {
      auto it = events_.begin();
      now_ = it->first.first;
      auto fn = std::move(it->second);
      events_.erase(it);
      fn();
    }
    finish();
    return std::move(report_);
  }

 private:
  using Fn = std::function<void()>;

  void at(long t, Fn fn) { events_.emplace(std::make_pair(t, evseq_++), std::move(fn)); }

  double rand01() { return static_cast<double>(rng_() >> 11) / 9007199254740992.0; }
  long rand_delay() {
    return static_cast<long>(rng_() % static_cast<std::uint64_t>(sc_.max_delay_us + 1));
  }

  const Label& label_name(int id) { return label_of_id_.at(id); }

  void log_verdict(const char* where, const Role& sw, const char* verdict,
                   const Packet& p) {
    log_ << now_ << " sw:" << sw << '/' << where << ' ' << verdict
         << " sid=" << p.hdr.session_id << ' ' << p.from << '>' << p.to;
    if (!p.is_control)
      log_ << ' ' << label_name(p.hdr.label_id) << " ssn=" << p.hdr.ssn;
    else
      log_ << " ack=" << p.ack_tseq;
    log_ << '\n';
  }

  // ---- host protocol engines -------------------------------------------

  void run_engine(int h, int e) {
    Host& host = hosts_[static_cast<std::size_t>(h)];
    Engine& eng = host.engines[static_cast<std::size_t>(e)];
    while (!eng.done && !eng.blocked) {
      TypePtr u = unfold(eng.type);
      if (std::holds_alternative<EndType>(u->node)) {
        eng.done = true;
        return;
      }
      if (const auto* ic = std::get_if<IntChoice>(&u->node)) {
        if (eng.fault_pending &&
            eng.sends_done == sc_.fault->before_send_index) {
          eng.fault_pending = false;
          for (int k = 0; k < sc_.fault->repeat; ++k)
            emit(h, e, sc_.fault->to, sc_.fault->label);
        }
        const SendBranch* br = pick_branch(eng, *ic, host.role);
        emit(h, e, br->to, br->label);
        eng.type = br->cont;
        ++eng.sends_done;
        continue;
      }
      const auto& ec = std::get<ExtChoice>(u->node);
      std::size_t idx = eng.buf.size();
      for (std::size_t i = 0; i < eng.buf.size(); ++i)
        if (eng.buf[i].sender == ec.from) {
          idx = i;
          break;
        }
      if (idx == eng.buf.size()) return;  // wait for input
      const QueuedMsg& m = eng.buf[idx];
      const RecvBranch* match = nullptr;
      for (const auto& br : ec.branches)
        if (br.label == m.label && br.sort == m.sort) {
          match = &br;
          break;
        }
      if (!match) {
        eng.blocked = true;
        log_ << now_ << " host:" << host.role << " blocked sid=" << (e + 1)
             << " on " << m.sender << ':' << m.label << '\n';
        return;
      }
      eng.type = match->cont;
      eng.buf.erase(eng.buf.begin() + static_cast<std::ptrdiff_t>(idx));
    }
  }

  const SendBranch* pick_branch(Engine& eng, const IntChoice& ic,
                                const Role& role) {
    if (ic.branches.size() == 1) return &ic.branches[0];
    if (eng.pick_i >= eng.picks.size())
      throw std::runtime_error("session script underrun for role " + role);
    const auto& [to, label] = eng.picks[eng.pick_i++];
    for (const auto& br : ic.branches)
      if (br.label == label && (to.empty() || br.to == to)) return &br;
    throw std::runtime_error("session script pick " + label +
                             " not available for role " + role);
  }

  void emit(int h, int e, const Role& to, const Label& label) {
    Host& host = hosts_[static_cast<std::size_t>(h)];
    Engine& eng = host.engines[static_cast<std::size_t>(e)];
    Packet p;
    p.from = host.role;
    p.to = to;
    p.hdr.msg_size = static_cast<std::uint8_t>(label.size());
    p.hdr.session_id = static_cast<std::uint16_t>(e + 1);
    p.hdr.label_id = static_cast<std::uint8_t>(ids_.label_ids.at(label));
    p.hdr.sender_id = static_cast<std::uint8_t>(host.role_id);
    p.hdr.receiver_id = static_cast<std::uint8_t>(ids_.role_ids.at(to));
    p.hdr.ssn = ++eng.next_ssn;
    if (sc_.transport == TransportKind::Datagram) {
      at(now_ + kHopUs, [this, p] { arrive_switch(true, p); });
      return;
    }
    Conn& conn = host.conns[{to, p.hdr.session_id}];
    p.tseq = conn.next_tseq++;
    conn.unacked[p.tseq] = {p, 0};
    send_copy(h, p);
    schedule_timeout(h, {to, p.hdr.session_id}, p.tseq, kInitialRtoUs);
  }

  void send_copy(int h, const Packet& p) {
    long delay = kHopUs;
    if (sc_.transport == TransportKind::Lossy) {
      delay += rand_delay();
      if (rand01() * 100.0 < sc_.dup_pct) {
        long d2 = kHopUs + rand_delay();
        at(now_ + d2, [this, p] { arrive_switch(true, p); });
        log_ << now_ << " host:" << hosts_[static_cast<std::size_t>(h)].role
             << " duplicated sid=" << p.hdr.session_id << " tseq=" << p.tseq
             << '\n';
      }
    }
    at(now_ + delay, [this, p] { arrive_switch(true, p); });
  }

  void schedule_timeout(int h, std::pair<Role, std::uint16_t> key,
                        std::uint64_t tseq, long rto) {
    at(now_ + rto, [this, h, key, tseq, rto] {
      Host& host = hosts_[static_cast<std::size_t>(h)];
      Conn& conn = host.conns[key];
      auto it = conn.unacked.find(tseq);
      if (it == conn.unacked.end()) return;  // acked meanwhile
      if (it->second.tries >= kMaxRetries) {
        stuck_sids_.insert(it->second.pkt.hdr.session_id);
        log_ << now_ << " host:" << host.role << " gave up sid="
             << it->second.pkt.hdr.session_id << " tseq=" << tseq << '\n';
        conn.unacked.erase(it);
        return;
      }
      ++it->second.tries;
      send_copy(h, it->second.pkt);
      schedule_timeout(h, key, tseq, rto * 2);
    });
  }

  // ---- switches ---------------------------------------------------------

  void arrive_switch(bool sender_side, const Packet& p) {
    const Role& sw = sender_side ? p.from : p.to;
    int h = host_of_role_.at(sw);
    bool forward = false;
    if (sc_.transport == TransportKind::Datagram) {
      auto v = core_mons_[static_cast<std::size_t>(h)].process(p.hdr);
      forward = v == CoreMonitor::Verdict::Accept;
      if (sender_side) {
        if (forward)
          ++report_.accepted;
        else
          ++report_.rejected;
      }
      log_verdict(sender_side ? "out" : "in", sw,
                  forward ? "ACCEPT" : "REJECT", p);
    } else {
      TcpMonitor& mon = tcp_mons_[static_cast<std::size_t>(h)];
      bool was_closer = closed_by_.count(p.hdr.session_id) &&
                        closed_by_.at(p.hdr.session_id) == h;
      auto v = mon.process(p.hdr, p.is_control);
      using V = TcpMonitor::Verdict;
      forward = v == V::AcceptAdvance || v == V::AcceptRetransmit ||
                v == V::PassThroughControl;
      if (v == V::RejectAndClose) {
        ++report_.reject_and_close;
        closed_by_.try_emplace(p.hdr.session_id, h);
      }
      if (was_closer && (v == V::AcceptAdvance || v == V::AcceptRetransmit))
        ++report_.accepts_after_close;
      if (sender_side && !p.is_control) {
        switch (v) {
          case V::AcceptAdvance: ++report_.accepted; break;
          case V::AcceptRetransmit: ++report_.retransmissions; break;
          case V::RejectDrop:
          case V::RejectAndClose: ++report_.rejected; break;
          case V::PassThroughControl: break;
        }
      }
      log_verdict(sender_side ? "out" : "in", sw, to_string(v).c_str(), p);
    }
    if (!forward) return;
    if (sender_side)
      at(now_ + kHopUs, [this, p] { arrive_switch(false, p); });
    else
      at(now_ + kHopUs, [this, p] { arrive_host(p); });
  }

  // ---- receiving host ---------------------------------------------------

  void arrive_host(const Packet& p) {
    int h = host_of_role_.at(p.to);
    Host& host = hosts_[static_cast<std::size_t>(h)];
    if (sc_.transport == TransportKind::Lossy &&
        rand01() * 100.0 < sc_.loss_pct) {
      log_ << now_ << " host:" << host.role << " lost sid=" << p.hdr.session_id
           << (p.is_control ? " ack" : " data") << " tseq=" << p.tseq << '\n';
      return;
    }
    if (p.is_control) {
      host.conns[{p.from, p.hdr.session_id}].unacked.erase(p.ack_tseq);
      return;
    }
    if (sc_.transport == TransportKind::Datagram) {
      deliver(h, p);
      return;
    }
    // Acknowledged transport: ack everything, deliver in per-connection
    // transport-sequence order, drop duplicates.
    send_ack(h, p);
    Conn& conn = host.conns[{p.from, p.hdr.session_id}];
    if (p.tseq < conn.next_in || conn.reorder.count(p.tseq)) return;
    conn.reorder[p.tseq] = p;
    while (!conn.reorder.empty() &&
           conn.reorder.begin()->first == conn.next_in) {
      Packet d = conn.reorder.begin()->second;
      conn.reorder.erase(conn.reorder.begin());
      ++conn.next_in;
      deliver(h, d);
    }
  }

  void send_ack(int h, const Packet& data) {
    Packet a;
    a.from = data.to;
    a.to = data.from;
    a.is_control = true;
    a.ack_tseq = data.tseq;
    a.hdr.session_id = data.hdr.session_id;
    a.hdr.sender_id = data.hdr.receiver_id;
    a.hdr.receiver_id = data.hdr.sender_id;
    send_copy(h, a);
  }

  void deliver(int h, const Packet& p) {
    Host& host = hosts_[static_cast<std::size_t>(h)];
    int e = p.hdr.session_id - 1;
    if (e < 0 || e >= static_cast<int>(host.engines.size())) return;
    const Label& label = label_name(p.hdr.label_id);
    host.engines[static_cast<std::size_t>(e)].buf.push_back(
        {p.from, label, sorts_.at(label)});
    run_engine(h, e);
  }

  // ---- final accounting -------------------------------------------------

  void finish() {
    std::set<std::uint16_t> closed;
    for (const auto& m : tcp_mons_)
      for (auto sid : m.closed) closed.insert(sid);
    for (std::size_t i = 0; i < sc_.sessions.size(); ++i) {
      std::uint16_t sid = static_cast<std::uint16_t>(i + 1);
      SessionOutcome o = SessionOutcome::Completed;
      if (closed.count(sid)) {
        o = SessionOutcome::Closed;
      } else if (stuck_sids_.count(sid)) {
        o = SessionOutcome::Stuck;
      } else {
        for (const auto& host : hosts_) {
          const Engine& e = host.engines[i];
          if (!e.done && (e.blocked || !e.buf.empty())) {
            o = SessionOutcome::Stuck;
            break;
          }
        }
      }
      report_.outcomes.push_back(o);
      switch (o) {
        case SessionOutcome::Completed: ++report_.completed; break;
        case SessionOutcome::Stuck: ++report_.stuck; break;
        case SessionOutcome::Closed: ++report_.closed; break;
      }
    }
    report_.event_log = log_.str();
  }

  const Scenario& sc_;
  std::mt19937_64 rng_;
  IdMap ids_;
  std::map<Label, Sort> sorts_;
  std::map<int, Label> label_of_id_;
  std::map<Role, int> host_of_role_;
  std::vector<Host> hosts_;
  std::vector<CoreMonitor> core_mons_;
  std::vector<TcpMonitor> tcp_mons_;
  std::map<std::uint16_t, int> closed_by_;
  std::set<std::uint16_t> stuck_sids_;
  std::map<std::pair<long, std::uint64_t>, Fn> events_;
  long now_ = 0;
  std::uint64_t evseq_ = 0;
  std::ostringstream log_;
  SimReport report_;
};

const char* transport_name(TransportKind k) {
  switch (k) {
    case TransportKind::Datagram: return "datagram";
    case TransportKind::Reliable: return "tcp-reliable";
    case TransportKind::Lossy: return "tcp-lossy";
  }
  return "?";
}

}  // namespace

std::string SimReport::csv(const std::string& scenario_name) const {
  std::ostringstream out;
  out << "scenario,sessions,accepted,rejected,retransmissions,completed,stuck,"
         "closed\n";
  out << scenario_name << ',' << outcomes.size() << ',' << accepted << ','
      << rejected << ',' << retransmissions << ',' << completed << ',' << stuck
      << ',' << closed << '\n';
  return out.str();
}

SimReport run_simulation(const Scenario& sc) {
  Simulator sim(sc);
  (void)transport_name;
  return sim.run();
}

}  // namespace stmon
