#include "stmon/switchmon.hpp"

namespace stmon {

WireMat WireMat::compile(const MatTable& mat, const IdMap& ids) {
  auto role_id = [&](const Role& r) {
    auto it = ids.role_ids.find(r);
    if (it == ids.role_ids.end())
      throw ValidationError("role not in id map: " + r);
    return it->second;
  };
  auto label_id = [&](const Label& l) {
    auto it = ids.label_ids.find(l);
    if (it == ids.label_ids.end())
      throw ValidationError("label not in id map: " + l);
    return it->second;
  };
  WireMat w;
  w.num_states = mat.num_states;
  w.guarded_role = role_id(mat.monitored);
  for (const auto& row : mat.rows) {
    int s = role_id(row.sender), r = role_id(row.receiver),
        l = label_id(row.label);
    w.accept[{row.state, s, r, l}] = row.next;
    w.receiver_pairs.insert({row.state, s, r});
  }
  return w;
}

CoreMonitor::Verdict CoreMonitor::process(const SessionHeader& h) {
  int& st = state.try_emplace(h.session_id, 0).first->second;
  auto it = mat.accept.find({st, h.sender_id, h.receiver_id, h.label_id});
  if (it == mat.accept.end()) return Verdict::Reject;
  st = it->second;
  return Verdict::Accept;
}

}  // namespace stmon
