#pragma once

#include "stmon/sim.hpp"

namespace stmon {

// Benchmark scenario presets for each corpus protocol.
//
//   UdpCorrect   datagram transport, scripted correct runs
//   UdpFaulty    datagram transport, scripted deviations (monitors drop them)
//   TcpCorrect   acknowledged transport, correct runs
//   TcpFaulty    acknowledged transport, deviations (monitors close sessions)
//   LossyCorrect acknowledged transport over an impaired network, correct
//   LossyFaulty  acknowledged transport over an impaired network, deviations
enum class Preset {
  UdpCorrect,
  UdpFaulty,
  TcpCorrect,
  TcpFaulty,
  LossyCorrect,
  LossyFaulty,
};

std::string to_string(Preset p);
Preset parse_preset(const std::string& s);  // throws std::invalid_argument

// Protocol names, in the order results are usually reported.
const std::vector<std::string>& corpus_names();

// Throws std::invalid_argument for an unknown name.
ProtocolDef corpus_protocol(const std::string& name);
Scenario corpus_scenario(const std::string& name, Preset p,
                         std::uint64_t seed = 1);

// Reference counts for the benchmark presets; -1 means the preset's value is
// environment-dependent (retransmission counts under loss, for instance) and
// is not pinned.
struct ExpectedStats {
  long accepted = -1;
  long rejected = -1;
  long retransmissions = -1;
};
ExpectedStats corpus_expected(const std::string& name, Preset p);

}  // namespace stmon
