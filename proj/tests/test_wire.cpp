#include <doctest.h>

#include <random>

#include "stmon/header.hpp"

using namespace stmon;

TEST_CASE("header golden encodings") {
  SessionHeader zero;
  CHECK(encode_header(zero) == std::array<std::uint8_t, 6>{0, 0, 0, 0, 0, 0});

  SessionHeader s1;
  s1.session_id = 1;
  CHECK(encode_header(s1) ==
        std::array<std::uint8_t, 6>{0x00, 0x00, 0x40, 0x00, 0x00, 0x00});
}

TEST_CASE("header field packing") {
  SessionHeader h;
  h.msg_size = 0xAB;
  h.session_id = 0x2C7;   // 10 1100 0111
  h.label_id = 0x15;      // 01 0101
  h.sender_id = 0x3;
  h.receiver_id = 0xE;
  h.ssn = 0xBEEF;
  auto b = encode_header(h);
  CHECK(b[0] == 0xAB);
  CHECK(b[1] == 0xB1);            // session id bits 9..2
  CHECK(b[2] == ((0x3 << 6) | 0x15));
  CHECK(b[3] == 0x3E);
  CHECK(b[4] == 0xBE);
  CHECK(b[5] == 0xEF);
  CHECK(decode_header(b) == h);
}

TEST_CASE("header range errors") {
  SessionHeader h;
  h.session_id = 1024;
  CHECK_THROWS_AS(encode_header(h), HeaderError);
  h = {};
  h.label_id = 64;
  CHECK_THROWS_AS(encode_header(h), HeaderError);
  h = {};
  h.sender_id = 16;
  CHECK_THROWS_AS(encode_header(h), HeaderError);
  h = {};
  h.receiver_id = 16;
  CHECK_THROWS_AS(encode_header(h), HeaderError);
}

TEST_CASE("header round-trips on random values") {
  std::mt19937_64 rng(97);
  for (int i = 0; i < 2000; ++i) {
    SessionHeader h;
    h.msg_size = static_cast<std::uint8_t>(rng() % 256);
    h.session_id = static_cast<std::uint16_t>(rng() % 1024);
    h.label_id = static_cast<std::uint8_t>(rng() % 64);
    h.sender_id = static_cast<std::uint8_t>(rng() % 16);
    h.receiver_id = static_cast<std::uint8_t>(rng() % 16);
    h.ssn = static_cast<std::uint16_t>(rng() % 65536);
    CHECK(decode_header(encode_header(h)) == h);
  }
}
