#include "stmon/netmodel.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>
#include <unordered_map>

namespace stmon {

std::string to_string(const NetLabel& l) {
  std::ostringstream out;
  if (l.kind == NetLabel::Kind::Comm)
    out << "comm(" << l.sender << "->" << l.receiver;
  else
    out << "deq(" << l.receiver << "<-" << l.sender;
  out << "," << l.label << "," << l.sort << ")";
  return out.str();
}

namespace {

void queue_key(std::ostringstream& out, const InputQueue& q) {
  for (const auto& m : q) out << m.sender << '/' << m.label << '/' << m.sort << ';';
}

std::string state_key(const Network& n) {
  std::ostringstream out;
  for (const auto& [r, ep] : n.endpoints) {
    out << r << '=' << canonical(ep.type) << '[';
    queue_key(out, ep.queue);
    out << "] ";
  }
  return out.str();
}

std::string state_key(const MonitoredNetwork& n) {
  std::ostringstream out;
  for (const auto& [r, ep] : n.endpoints) {
    out << r << '=' << canonical(ep.config.type) << '[';
    queue_key(out, ep.config.queue);
    out << "]~" << canonical(ep.monitor) << ' ';
  }
  return out.str();
}

struct Graph {
  std::vector<std::vector<std::pair<int, int>>> out;  // node -> (label id, target)
  std::vector<int> parent;        // BFS tree parent (-1 for root)
  std::vector<int> parent_label;  // label id of the tree edge
  std::vector<NetLabel> labels;   // label id -> label
  std::map<std::string, int> label_ids;

  int intern_label(const NetLabel& l) {
    auto [it, fresh] = label_ids.try_emplace(to_string(l),
                                             static_cast<int>(labels.size()));
    if (fresh) labels.push_back(l);
    return it->second;
  }

  std::vector<NetLabel> path_to(int node) const {
    std::vector<NetLabel> p;
    for (int n = node; parent[static_cast<std::size_t>(n)] >= 0;
         n = parent[static_cast<std::size_t>(n)])
      p.push_back(labels[static_cast<std::size_t>(
          parent_label[static_cast<std::size_t>(n)])]);
    std::reverse(p.begin(), p.end());
    return p;
  }
};

template <class State, class StepFn>
Graph explore(const State& init, StepFn step, long max_states,
              std::vector<State>* states_out = nullptr) {
  Graph g;
  std::unordered_map<std::string, int> index;
  std::vector<State> states{init};
  index.emplace(state_key(init), 0);
  g.out.emplace_back();
  g.parent.push_back(-1);
  g.parent_label.push_back(-1);
  std::deque<int> work{0};
  while (!work.empty()) {
    int s = work.front();
    work.pop_front();
    for (auto& [label, next] : step(states[static_cast<std::size_t>(s)])) {
      std::string key = state_key(next);
      auto it = index.find(key);
      int id;
      if (it == index.end()) {
        if (static_cast<long>(states.size()) >= max_states)
          throw StateBoundExceeded("network exploration exceeds " +
                                   std::to_string(max_states) + " states");
        id = static_cast<int>(states.size());
        index.emplace(std::move(key), id);
        states.push_back(std::move(next));
        g.out.emplace_back();
        g.parent.push_back(s);
        g.parent_label.push_back(g.intern_label(label));
        work.push_back(id);
      } else {
        id = it->second;
      }
      g.out[static_cast<std::size_t>(s)].push_back({g.intern_label(label), id});
    }
  }
  if (states_out) *states_out = std::move(states);
  return g;
}

}  // namespace

namespace {

// The queue bound caps in-flight messages per (sender, recipient) pair: a
// sender with `max_queue_len` messages already waiting at the recipient may
// not send again. A whole-queue cap would starve multi-client servers (three
// clients, bound two: the third could never reach the server) and flag
// bound artifacts as liveness violations.
bool sender_slot_free(const InputQueue& q, const Role& sender, int bound) {
  int held = 0;
  for (const auto& m : q)
    if (m.sender == sender) ++held;
  return held < bound;
}

}  // namespace

std::vector<std::pair<NetLabel, Network>> net_step(const Network& n,
                                                   const ExplorationBounds& b) {
  std::vector<std::pair<NetLabel, Network>> out;
  for (const auto& [p, ep] : n.endpoints) {
    TypePtr u = unfold(ep.type);
    // Comm: p sends, the message lands in the recipient's queue.
    if (const auto* ic = std::get_if<IntChoice>(&u->node)) {
      for (const auto& br : ic->branches) {
        auto qit = n.endpoints.find(br.to);
        if (qit == n.endpoints.end()) continue;
        if (!sender_slot_free(qit->second.queue, p, b.max_queue_len))
          continue;
        Network next = n;
        next.endpoints[p].type = br.cont;
        next.endpoints[br.to].queue.push_back({p, br.label, br.sort});
        out.push_back({{NetLabel::Kind::Comm, p, br.to, br.label, br.sort},
                       std::move(next)});
      }
    }
    // Deq: p consumes the oldest queued message from its expected sender.
    if (const auto* ec = std::get_if<ExtChoice>(&u->node)) {
      for (std::size_t i = 0; i < ep.queue.size(); ++i) {
        const QueuedMsg& m = ep.queue[i];
        if (m.sender != ec->from) continue;
        bool oldest = true;
        for (std::size_t j = 0; j < i; ++j)
          if (ep.queue[j].sender == m.sender) {
            oldest = false;
            break;
          }
        if (!oldest) break;
        for (const auto& br : ec->branches) {
          if (br.label == m.label && br.sort == m.sort) {
            Network next = n;
            next.endpoints[p].type = br.cont;
            next.endpoints[p].queue.erase(next.endpoints[p].queue.begin() +
                                          static_cast<std::ptrdiff_t>(i));
            out.push_back({{NetLabel::Kind::Deq, m.sender, p, m.label, m.sort},
                           std::move(next)});
            break;
          }
        }
        break;  // only the oldest message from ec->from is eligible
      }
    }
  }
  return out;
}

std::vector<std::pair<NetLabel, MonitoredNetwork>> mnet_step(
    const MonitoredNetwork& n, const ExplorationBounds& b,
    int max_accept_depth) {
  std::vector<std::pair<NetLabel, MonitoredNetwork>> out;
  for (const auto& [p, ep] : n.endpoints) {
    TypePtr u = unfold(ep.config.type);
    if (const auto* ic = std::get_if<IntChoice>(&u->node)) {
      for (const auto& br : ic->branches) {
        auto qit = n.endpoints.find(br.to);
        if (qit == n.endpoints.end()) continue;
        if (!sender_slot_free(qit->second.config.queue, p, b.max_queue_len))
          continue;
        // Both border monitors must agree before the message moves.
        auto ms = accept_send(ep.monitor, br.to, br.label, br.sort);
        if (!ms) continue;
        auto me = accept_enqueue(qit->second.monitor, p, br.label, br.sort,
                                 max_accept_depth);
        if (!me) continue;
        MonitoredNetwork next = n;
        next.endpoints[p].config.type = br.cont;
        next.endpoints[p].monitor = *ms;
        next.endpoints[br.to].config.queue.push_back({p, br.label, br.sort});
        next.endpoints[br.to].monitor = *me;
        out.push_back({{NetLabel::Kind::Comm, p, br.to, br.label, br.sort},
                       std::move(next)});
      }
    }
    if (const auto* ec = std::get_if<ExtChoice>(&u->node)) {
      for (std::size_t i = 0; i < ep.config.queue.size(); ++i) {
        const QueuedMsg& m = ep.config.queue[i];
        if (m.sender != ec->from) continue;
        bool oldest = true;
        for (std::size_t j = 0; j < i; ++j)
          if (ep.config.queue[j].sender == m.sender) {
            oldest = false;
            break;
          }
        if (!oldest) break;
        for (const auto& br : ec->branches) {
          if (br.label == m.label && br.sort == m.sort) {
            MonitoredNetwork next = n;
            next.endpoints[p].config.type = br.cont;
            next.endpoints[p].config.queue.erase(
                next.endpoints[p].config.queue.begin() +
                static_cast<std::ptrdiff_t>(i));
            out.push_back({{NetLabel::Kind::Deq, m.sender, p, m.label, m.sort},
                           std::move(next)});
            break;
          }
        }
        break;
      }
    }
  }
  return out;
}

std::optional<MonitoredNetwork> instrument(const Network& n, Role* failing) {
  MonitoredNetwork m;
  for (const auto& [r, ep] : n.endpoints) {
    auto mon = monitor_queue_state(ep.type, ep.queue);
    if (!mon) {
      if (failing) *failing = r;
      return std::nullopt;
    }
    m.endpoints[r] = {ep, *mon};
  }
  return m;
}

namespace {

bool holds_msg_from(const Network& n, const Role& p, const Role& s) {
  auto it = n.endpoints.find(p);
  if (it == n.endpoints.end()) return false;
  for (const auto& m : it->second.queue)
    if (m.sender == s) return true;
  return false;
}

}  // namespace

Verdict check_half_duplex(const Network& n, const ExplorationBounds& b) {
  std::vector<Network> states;
  Graph g = explore(
      n, [&](const Network& s) { return net_step(s, b); }, b.max_states,
      &states);
  std::vector<Role> roles;
  for (const auto& [r, ep] : n.endpoints) roles.push_back(r);
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t a = 0; a < roles.size(); ++a) {
      for (std::size_t c = a + 1; c < roles.size(); ++c) {
        if (holds_msg_from(states[i], roles[a], roles[c]) &&
            holds_msg_from(states[i], roles[c], roles[a])) {
          Verdict v;
          v.holds = false;
          v.witness = g.path_to(static_cast<int>(i));
          v.reason = "both directions of the " + roles[a] + "<->" + roles[c] +
                     " channel are non-empty";
          return v;
        }
      }
    }
  }
  return {true, {}, ""};
}

Verdict check_output_live(const Network& n, const ExplorationBounds& b) {
  std::vector<Network> states;
  Graph g = explore(
      n, [&](const Network& s) { return net_step(s, b); }, b.max_states,
      &states);
  const std::size_t N = states.size();
  std::vector<Role> roles;
  for (const auto& [r, ep] : n.endpoints) roles.push_back(r);

  // Reverse adjacency for backward reachability.
  std::vector<std::vector<int>> rin(N);
  for (std::size_t s = 0; s < N; ++s)
    for (const auto& [l, t] : g.out[s]) rin[static_cast<std::size_t>(t)].push_back(static_cast<int>(s));

  for (const auto& p : roles) {
    for (const auto& s : roles) {
      if (s == p) continue;
      auto is_deq_ps = [&](int label_id) {
        const NetLabel& l = g.labels[static_cast<std::size_t>(label_id)];
        return l.kind == NetLabel::Kind::Deq && l.receiver == p && l.sender == s;
      };

      // (a) every state holding a message from s at p must be able to reach
      // some Deq(p<-s) edge; per-sender FIFO keeps the oldest such message
      // pending until one fires.
      std::vector<char> can_reach(N, 0);
      std::deque<int> bw;
      for (std::size_t st = 0; st < N; ++st)
        for (const auto& [l, t] : g.out[st])
          if (is_deq_ps(l) && !can_reach[st]) {
            can_reach[st] = 1;
            bw.push_back(static_cast<int>(st));
          }
      while (!bw.empty()) {
        int v = bw.front();
        bw.pop_front();
        for (int u : rin[static_cast<std::size_t>(v)])
          if (!can_reach[static_cast<std::size_t>(u)]) {
            can_reach[static_cast<std::size_t>(u)] = 1;
            bw.push_back(u);
          }
      }
      std::vector<char> holds(N, 0);
      for (std::size_t st = 0; st < N; ++st)
        holds[st] = holds_msg_from(states[st], p, s) ? 1 : 0;
      for (std::size_t st = 0; st < N; ++st) {
        if (holds[st] && !can_reach[st]) {
          Verdict v;
          v.holds = false;
          v.witness = g.path_to(static_cast<int>(st));
          v.reason = "a message from " + s + " queued at " + p +
                     " can never be dequeued";
          return v;
        }
      }

      // (b) fair starvation cycles: SCCs within the holding states, avoiding
      // Deq(p<-s) edges, where every label enabled anywhere in the SCC is
      // also taken inside the SCC.
      // Iterative Tarjan over the restricted subgraph.
      std::vector<int> idx(N, -1), low(N, 0), comp(N, -1);
      std::vector<char> on_stack(N, 0);
      std::vector<int> stack;
      int next_idx = 0, next_comp = 0;
      auto sub_edges = [&](std::size_t st) {
        std::vector<std::pair<int, int>> es;
        if (!holds[st]) return es;
        for (const auto& [l, t] : g.out[st])
          if (!is_deq_ps(l) && holds[static_cast<std::size_t>(t)])
            es.push_back({l, t});
        return es;
      };
      struct Frame {
        int v;
        std::size_t edge = 0;
      };
      for (std::size_t root = 0; root < N; ++root) {
        if (!holds[root] || idx[root] != -1) continue;
        std::vector<Frame> call{{static_cast<int>(root)}};
        while (!call.empty()) {
          Frame& f = call.back();
          std::size_t v = static_cast<std::size_t>(f.v);
          if (f.edge == 0) {
            idx[v] = low[v] = next_idx++;
            stack.push_back(f.v);
            on_stack[v] = 1;
          }
          auto es = sub_edges(v);
          bool descended = false;
          while (f.edge < es.size()) {
            int w = es[f.edge].second;
            ++f.edge;
            if (idx[static_cast<std::size_t>(w)] == -1) {
              call.push_back({w});
              descended = true;
              break;
            }
            if (on_stack[static_cast<std::size_t>(w)])
              low[v] = std::min(low[v], idx[static_cast<std::size_t>(w)]);
          }
          if (descended) continue;
          if (low[v] == idx[v]) {
            while (true) {
              int w = stack.back();
              stack.pop_back();
              on_stack[static_cast<std::size_t>(w)] = 0;
              comp[static_cast<std::size_t>(w)] = next_comp;
              if (w == f.v) break;
            }
            ++next_comp;
          }
          call.pop_back();
          if (!call.empty()) {
            std::size_t pv = static_cast<std::size_t>(call.back().v);
            low[pv] = std::min(low[pv], low[v]);
          }
        }
      }
      // Analyse each SCC.
      std::vector<std::set<int>> internal(static_cast<std::size_t>(next_comp)),
          enabled(static_cast<std::size_t>(next_comp));
      std::vector<int> scc_size(static_cast<std::size_t>(next_comp), 0);
      std::vector<int> scc_member(static_cast<std::size_t>(next_comp), -1);
      std::vector<char> has_internal_edge(static_cast<std::size_t>(next_comp), 0);
      for (std::size_t st = 0; st < N; ++st) {
        if (comp[st] < 0) continue;
        std::size_t c = static_cast<std::size_t>(comp[st]);
        ++scc_size[c];
        scc_member[c] = static_cast<int>(st);
        for (const auto& [l, t] : g.out[st]) enabled[c].insert(l);
        for (const auto& [l, t] : sub_edges(st))
          if (comp[static_cast<std::size_t>(t)] == comp[st]) {
            internal[c].insert(l);
            has_internal_edge[c] = 1;
          }
      }
      for (std::size_t c = 0; c < static_cast<std::size_t>(next_comp); ++c) {
        if (!has_internal_edge[c]) continue;
        if (std::includes(internal[c].begin(), internal[c].end(),
                          enabled[c].begin(), enabled[c].end())) {
          Verdict v;
          v.holds = false;
          v.witness = g.path_to(scc_member[c]);
          v.reason = "a fair cycle starves a message from " + s +
                     " queued at " + p;
          return v;
        }
      }
    }
  }
  return {true, {}, ""};
}

Verdict internal_bisim(const Network& n, const MonitoredNetwork& m,
                       const ExplorationBounds& b) {
  // Both graphs share one label interner so signatures are comparable.
  Graph ga = explore(
      n, [&](const Network& s) { return net_step(s, b); }, b.max_states);
  std::vector<MonitoredNetwork> dummy;
  Graph gb = explore(
      m, [&](const MonitoredNetwork& s) { return mnet_step(s, b); },
      b.max_states, &dummy);

  const std::size_t NA = ga.out.size(), NB = gb.out.size(), N = NA + NB;
  // Re-intern b's labels into a's id space.
  std::map<std::string, int> ids = ga.label_ids;
  std::vector<NetLabel> labels = ga.labels;
  std::vector<int> remap(gb.labels.size());
  for (std::size_t i = 0; i < gb.labels.size(); ++i) {
    auto [it, fresh] =
        ids.try_emplace(to_string(gb.labels[i]), static_cast<int>(labels.size()));
    if (fresh) labels.push_back(gb.labels[i]);
    remap[i] = it->second;
  }
  auto out_of = [&](std::size_t node) {
    std::vector<std::pair<int, int>> es;  // (label, union node)
    if (node < NA) {
      for (const auto& [l, t] : ga.out[node]) es.push_back({l, t});
    } else {
      for (const auto& [l, t] : gb.out[node - NA])
        es.push_back({remap[static_cast<std::size_t>(l)],
                      static_cast<int>(NA) + t});
    }
    return es;
  };

  // Signature-based partition refinement; block history kept per round so a
  // distinguishing trace can be reconstructed on failure.
  std::vector<std::vector<int>> history;
  history.emplace_back(N, 0);
  while (true) {
    const std::vector<int>& cur = history.back();
    std::map<std::pair<int, std::vector<std::pair<int, int>>>, int> sig_ids;
    std::vector<int> next(N);
    for (std::size_t v = 0; v < N; ++v) {
      std::vector<std::pair<int, int>> sig;
      for (const auto& [l, t] : out_of(v))
        sig.push_back({l, cur[static_cast<std::size_t>(t)]});
      std::sort(sig.begin(), sig.end());
      sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
      auto [it, fresh] = sig_ids.try_emplace({cur[v], std::move(sig)},
                                             static_cast<int>(sig_ids.size()));
      next[v] = it->second;
    }
    bool stable = true;
    for (std::size_t v = 0; v < N; ++v)
      if (next[v] != history.back()[v]) {
        stable = false;
        break;
      }
    std::size_t blocks_before = sig_ids.size();
    history.push_back(std::move(next));
    if (stable || blocks_before == N) break;
    // Converged when the block count stops growing.
    std::set<int> a_blocks(history.back().begin(), history.back().end());
    std::set<int> prev_blocks(history[history.size() - 2].begin(),
                              history[history.size() - 2].end());
    if (a_blocks.size() == prev_blocks.size()) break;
  }
  const std::vector<int>& fin = history.back();
  if (fin[0] == fin[NA]) return {true, {}, ""};

  // Distinguishing trace: walk down the refinement rounds.
  std::function<std::vector<NetLabel>(int, int, std::size_t)> distinguish =
      [&](int x, int y, std::size_t round) -> std::vector<NetLabel> {
    // x and y differ at `round`; find the earliest round where they differ.
    std::size_t k = 1;
    while (k <= round && history[k][static_cast<std::size_t>(x)] ==
                             history[k][static_cast<std::size_t>(y)])
      ++k;
    const std::vector<int>& prev = history[k - 1];
    // Some (label, prev-block) move of one side is unmatched by the other.
    for (int swap = 0; swap < 2; ++swap) {
      int s = swap ? y : x, t = swap ? x : y;
      for (const auto& [l, sn] : out_of(static_cast<std::size_t>(s))) {
        bool matched = false;
        int best_tn = -1;
        for (const auto& [l2, tn] : out_of(static_cast<std::size_t>(t))) {
          if (l2 != l) continue;
          best_tn = tn;
          if (prev[static_cast<std::size_t>(tn)] ==
              prev[static_cast<std::size_t>(sn)]) {
            matched = true;
            break;
          }
        }
        if (!matched) {
          std::vector<NetLabel> trace{labels[static_cast<std::size_t>(l)]};
          if (best_tn >= 0 && k >= 2) {
            auto rest = distinguish(sn, best_tn, k - 1);
            trace.insert(trace.end(), rest.begin(), rest.end());
          }
          return trace;
        }
      }
    }
    return {};
  };
  Verdict v;
  v.holds = false;
  v.witness = distinguish(0, static_cast<int>(NA), history.size() - 1);
  v.reason = "network and monitored network are not weakly equivalent";
  return v;
}

}  // namespace stmon
