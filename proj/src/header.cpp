#include "stmon/header.hpp"

namespace stmon {

std::array<std::uint8_t, 6> encode_header(const SessionHeader& h) {
  if (h.session_id > 1023)
    throw HeaderError("session id out of range: " + std::to_string(h.session_id));
  if (h.label_id > 63)
    throw HeaderError("label id out of range: " + std::to_string(h.label_id));
  if (h.sender_id > 15)
    throw HeaderError("sender id out of range: " + std::to_string(h.sender_id));
  if (h.receiver_id > 15)
    throw HeaderError("receiver id out of range: " +
                      std::to_string(h.receiver_id));
  return {
      h.msg_size,
      static_cast<std::uint8_t>(h.session_id >> 2),
      static_cast<std::uint8_t>(((h.session_id & 0x3u) << 6) | h.label_id),
      static_cast<std::uint8_t>((h.sender_id << 4) | h.receiver_id),
      static_cast<std::uint8_t>(h.ssn >> 8),
      static_cast<std::uint8_t>(h.ssn & 0xffu),
  };
}

SessionHeader decode_header(const std::array<std::uint8_t, 6>& b) {
  SessionHeader h;
  h.msg_size = b[0];
  h.session_id = static_cast<std::uint16_t>((b[1] << 2) | (b[2] >> 6));
  h.label_id = b[2] & 0x3fu;
  h.sender_id = b[3] >> 4;
  h.receiver_id = b[3] & 0x0fu;
  h.ssn = static_cast<std::uint16_t>((b[4] << 8) | b[5]);
  return h;
}

}  // namespace stmon
