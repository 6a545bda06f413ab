#pragma once

#include "stmon/switchmon.hpp"

namespace stmon {

// Border monitor for connection-oriented transports. On top of the wire MAT
// it tracks, per session, the highest sequence number accepted from each
// sender, so retransmissions pass without re-advancing the protocol state,
// and a session whose guarded endpoint provably misbehaved (in-sequence send
// with a wrong label) is closed for good.
struct TcpMonitor {
  WireMat mat;
  std::map<std::uint16_t, int> state;
  // (session, sender id) -> highest accepted ssn (0 = nothing yet; the first
  // message of a sender carries ssn 1).
  std::map<std::pair<std::uint16_t, int>, std::uint16_t> ssn;
  std::set<std::uint16_t> closed;

  enum class Verdict {
    AcceptAdvance,
    AcceptRetransmit,
    PassThroughControl,
    RejectDrop,
    RejectAndClose,
  };

  // `is_control` marks connection-management packets (SYN/FIN/pure ACK),
  // which carry no session payload and always pass through unexamined.
  Verdict process(const SessionHeader& h, bool is_control);
};

std::string to_string(TcpMonitor::Verdict v);

}  // namespace stmon
