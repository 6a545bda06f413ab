#include "stmon/tcpmon.hpp"

namespace stmon {

TcpMonitor::Verdict TcpMonitor::process(const SessionHeader& h,
                                        bool is_control) {
  if (is_control) return Verdict::PassThroughControl;
  if (closed.count(h.session_id)) return Verdict::RejectDrop;

  std::uint16_t& stored =
      ssn.try_emplace({h.session_id, h.sender_id}, 0).first->second;
  if (h.ssn <= stored) return Verdict::AcceptRetransmit;

  int& st = state.try_emplace(h.session_id, 0).first->second;
  auto row = mat.accept.find({st, h.sender_id, h.receiver_id, h.label_id});
  if (row != mat.accept.end()) {
    if (h.sender_id == mat.guarded_role) {
      // Outgoing traffic must be strictly in sequence.
      if (h.ssn != static_cast<std::uint16_t>(stored + 1))
        return Verdict::RejectDrop;
    }
    // Incoming traffic adopts the sender's sequence number as seen.
    st = row->second;
    stored = h.ssn;
    return Verdict::AcceptAdvance;
  }
  // No label matches. If our own endpoint sent this in sequence, the
  // violation is proven and the session is closed for good.
  if (mat.receiver_pairs.count({st, h.sender_id, h.receiver_id}) &&
      h.sender_id == mat.guarded_role &&
      h.ssn == static_cast<std::uint16_t>(stored + 1)) {
    closed.insert(h.session_id);
    return Verdict::RejectAndClose;
  }
  return Verdict::RejectDrop;
}

std::string to_string(TcpMonitor::Verdict v) {
  switch (v) {
    case TcpMonitor::Verdict::AcceptAdvance: return "AcceptAdvance";
    case TcpMonitor::Verdict::AcceptRetransmit: return "AcceptRetransmit";
    case TcpMonitor::Verdict::PassThroughControl: return "PassThroughControl";
    case TcpMonitor::Verdict::RejectDrop: return "RejectDrop";
    case TcpMonitor::Verdict::RejectAndClose: return "RejectAndClose";
  }
  return "?";
}

}  // namespace stmon
