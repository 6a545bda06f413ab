#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>

namespace stmon {

// 6-byte session header prepended to every monitored payload:
//   byte 0   message size
//   byte 1   session id bits 9..2
//   byte 2   session id bits 1..0 (high), label id (low 6 bits)
//   byte 3   sender id (high nibble), receiver id (low nibble)
//   bytes 4-5  per-(session, sender) sequence number, big-endian
struct SessionHeader {
  std::uint8_t msg_size = 0;
  std::uint16_t session_id = 0;  // 10 bits: 0..1023
  std::uint8_t label_id = 0;     // 6 bits: 0..63
  std::uint8_t sender_id = 0;    // 4 bits: 1..15 (0 invalid)
  std::uint8_t receiver_id = 0;  // 4 bits: 1..15 (0 invalid)
  std::uint16_t ssn = 0;
  bool operator==(const SessionHeader&) const = default;
};

struct HeaderError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::array<std::uint8_t, 6> encode_header(const SessionHeader& h);
SessionHeader decode_header(const std::array<std::uint8_t, 6>& bytes);

}  // namespace stmon
