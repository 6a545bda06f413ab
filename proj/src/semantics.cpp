#include "stmon/semantics.hpp"

namespace stmon {

std::string to_string(const Action& a) {
  const char* k = nullptr;
  switch (a.kind) {
    case ActKind::Out: k = "out"; break;
    case ActKind::In: k = "in"; break;
    case ActKind::Send: k = "send"; break;
    case ActKind::Enqueue: k = "enq"; break;
    case ActKind::Deq: k = "deq"; break;
  }
  return std::string(k) + "(" + a.peer + "," + a.label + "," + a.sort + ")";
}

TypePtr unfold(const TypePtr& t) {
  TypePtr cur = t;
  while (const auto* rec = std::get_if<RecType>(&cur->node)) {
    cur = substitute(rec->body, rec->var, cur);
  }
  return cur;
}

std::vector<std::pair<Action, TypePtr>> type_transitions(const TypePtr& t) {
  std::vector<std::pair<Action, TypePtr>> out;
  TypePtr u = unfold(t);
  if (const auto* ic = std::get_if<IntChoice>(&u->node)) {
    for (const auto& b : ic->branches)
      out.push_back({{ActKind::Out, b.to, b.label, b.sort}, b.cont});
  } else if (const auto* ec = std::get_if<ExtChoice>(&u->node)) {
    for (const auto& b : ec->branches)
      out.push_back({{ActKind::In, ec->from, b.label, b.sort}, b.cont});
  }
  return out;
}

std::vector<std::pair<Action, EndpointConfig>> config_transitions(
    const EndpointConfig& c, const Universe& universe, const Role& self,
    int max_queue_len) {
  std::vector<std::pair<Action, EndpointConfig>> out;
  TypePtr u = unfold(c.type);

  // Send: mirrors Out, queue unchanged.
  if (const auto* ic = std::get_if<IntChoice>(&u->node)) {
    for (const auto& b : ic->branches)
      out.push_back({{ActKind::Send, b.to, b.label, b.sort},
                     EndpointConfig{b.cont, c.queue}});
  }

  // Deq: the oldest message from each sender, if the type is an external
  // choice on that sender with a matching branch.
  if (const auto* ec = std::get_if<ExtChoice>(&u->node)) {
    for (std::size_t i = 0; i < c.queue.size(); ++i) {
      const QueuedMsg& m = c.queue[i];
      bool oldest_from_sender = true;
      for (std::size_t j = 0; j < i; ++j)
        if (c.queue[j].sender == m.sender) {
          oldest_from_sender = false;
          break;
        }
      if (!oldest_from_sender || m.sender != ec->from) continue;
      for (const auto& b : ec->branches) {
        if (b.label == m.label && b.sort == m.sort) {
          InputQueue q = c.queue;
          q.erase(q.begin() + static_cast<std::ptrdiff_t>(i));
          out.push_back({{ActKind::Deq, m.sender, m.label, m.sort},
                         EndpointConfig{b.cont, std::move(q)}});
          break;
        }
      }
    }
  }

  // Enqueue: arbitrary message from any other role in the universe.
  if (max_queue_len < 0 ||
      c.queue.size() < static_cast<std::size_t>(max_queue_len)) {
    for (const auto& r : universe.roles) {
      if (r == self) continue;
      for (const auto& [l, s] : universe.messages) {
        InputQueue q = c.queue;
        q.push_back({r, l, s});
        out.push_back({{ActKind::Enqueue, r, l, s},
                       EndpointConfig{c.type, std::move(q)}});
      }
    }
  }
  return out;
}

bool queue_equiv(const InputQueue& a, const InputQueue& b) {
  if (a.size() != b.size()) return false;
  std::map<Role, std::vector<std::pair<Label, Sort>>> pa, pb;
  for (const auto& m : a) pa[m.sender].push_back({m.label, m.sort});
  for (const auto& m : b) pb[m.sender].push_back({m.label, m.sort});
  return pa == pb;
}

}  // namespace stmon
