#include "stmon/corpus.hpp"

#include <stdexcept>

#include "stmon/parser.hpp"

namespace stmon {
namespace {

using Picks = std::vector<std::pair<Role, Label>>;

TypePtr T(const std::string& s) { return parse_session_type(s); }

Picks rep(const Role& to, const Label& label, int k, Picks tail = {}) {
  Picks p;
  for (int i = 0; i < k; ++i) p.emplace_back(to, label);
  p.insert(p.end(), tail.begin(), tail.end());
  return p;
}

bool preset_faulty(Preset p) {
  return p == Preset::UdpFaulty || p == Preset::TcpFaulty ||
         p == Preset::LossyFaulty;
}

bool preset_lossy(Preset p) {
  return p == Preset::LossyCorrect || p == Preset::LossyFaulty;
}

TransportKind preset_transport(Preset p) {
  switch (p) {
    case Preset::UdpCorrect:
    case Preset::UdpFaulty: return TransportKind::Datagram;
    case Preset::TcpCorrect:
    case Preset::TcpFaulty: return TransportKind::Reliable;
    case Preset::LossyCorrect:
    case Preset::LossyFaulty: return TransportKind::Lossy;
  }
  return TransportKind::Datagram;
}

Scenario base_scenario(ProtocolDef proto, Preset p, std::uint64_t seed) {
  Scenario sc;
  sc.protocol = std::move(proto);
  sc.transport = preset_transport(p);
  sc.seed = seed;
  return sc;
}

void fill_sessions(Scenario& sc, int n, const SessionScript& script,
                   bool faulty) {
  SessionScript s = script;
  s.faulty = faulty;
  sc.sessions.assign(static_cast<std::size_t>(n), s);
}

// ---- protocol definitions ------------------------------------------------

ProtocolDef book_protocol() {
  ProtocolDef p;
  p.name = "book";
  p.initiator = "Client";
  p.roles["Client"] = T("Info!req(int).Info&rsp(str).end");
  p.roles["Info"] =
      T("Client&req(int).Review!r_req(int).Details!d_req(int)."
        "Review&r_rsp(str).Details&d_rsp(str).Client!rsp(str).end");
  p.roles["Review"] =
      T("Info&r_req(int).Ratings!rat_req(int).Ratings&rat_rsp(str)."
        "Info!r_rsp(str).end");
  p.roles["Details"] = T("Info&d_req(int).Info!d_rsp(str).end");
  p.roles["Ratings"] = T("Review&rat_req(int).Review!rat_rsp(str).end");
  return p;
}

ProtocolDef store_protocol() {
  ProtocolDef p;
  p.name = "store";
  p.initiator = "Client";
  p.roles["Client"] =
      T("HTTP!PlaceOrder(int).HTTP&SKUDetails(int).rec X."
        "+{HTTP!ConfirmOrder(int).HTTP&{ValidCC(int).end, InvalidCC(int).X},"
        "  HTTP!CancelOrder(int).HTTP&Cancel(int).end}");
  p.roles["HTTP"] =
      T("Client&PlaceOrder(int).Inventory!GetSKUDetails(int)."
        "Inventory&SKUDetails(int).Client!SKUDetails(int).rec X."
        "Client&{ConfirmOrder(int).Payment!VerifyCC(int)."
        "  Payment&{ValidCC(int).Payment!MakeCharge(int)."
        "    Inventory!MakeOrder(int).Client!ValidCC(int).end,"
        "  InvalidCC(int).Client!InvalidCC(int).X},"
        "CancelOrder(int).Client!Cancel(int).end}");
  p.roles["Inventory"] =
      T("HTTP&GetSKUDetails(int).HTTP!SKUDetails(int).HTTP&MakeOrder(int)."
        "Shipping!ShipOrder(int).end");
  p.roles["Payment"] =
      T("rec X.HTTP&VerifyCC(int).+{HTTP!ValidCC(int).HTTP&MakeCharge(int)."
        "Bank!MakeCharge(int).end, HTTP!InvalidCC(int).X}");
  p.roles["Shipping"] =
      T("Inventory&ShipOrder(int).Email!SendEmail(int).Email&Success(int).end");
  p.roles["Bank"] = T("Payment&MakeCharge(int).end");
  p.roles["Email"] = T("Shipping&SendEmail(int).Shipping!Success(int).end");
  return p;
}

ProtocolDef vpn_protocol() {
  ProtocolDef p;
  p.name = "vpn";
  p.initiator = "ClientA";
  p.roles["Auth"] =
      T("rec X.ClientA&Auth(int).ClientB&Auth(int).ClientC&Auth(int)."
        "+{ClientA!Accept(int).ClientB!Accept(int).ClientC!Accept(int)."
        "  ClientA&Terminate(int).ClientB&Terminate(int)."
        "  ClientC&Terminate(int).end,"
        "  ClientA!Deny(int).ClientB!Deny(int).ClientC!Deny(int).X}");
  p.roles["ClientA"] =
      T("rec X.Auth!Auth(int).Auth&{Deny(int).X, Accept(int).rec Y."
        "+{ClientB!ClientRequest(int).ClientB&ClientResponse(int).Y,"
        "  ClientB!Terminate(int).rec Z."
        "  +{ClientC!ClientRequest(int).ClientC&ClientResponse(int).Z,"
        "    ClientC!Terminate(int).Auth!Terminate(int).end}}}");
  const char* responder =
      "rec X.Auth!Auth(int).Auth&{Deny(int).X, Accept(int).rec Y."
      "ClientA&{ClientRequest(int).ClientA!ClientResponse(int).Y,"
      "         Terminate(int).Auth!Terminate(int).end}}";
  p.roles["ClientB"] = T(responder);
  p.roles["ClientC"] = T(responder);
  return p;
}

ProtocolDef firewall_protocol() {
  ProtocolDef p;
  p.name = "firewall";
  p.initiator = "Int";
  p.roles["Int"] =
      T("rec X.+{Ext!Request(int).Ext&Response(int).X,"
        "         Ext!Terminate(int).rec Y."
        "         Ext&{Request(int).Ext!Response(int).Y,"
        "              Terminate(int).end}}");
  p.roles["Ext"] =
      T("rec X.Int&{Request(int).Int!Response(int).X,"
        "           Terminate(int).rec Y."
        "           +{Int!Request(int).Int&Response(int).Y,"
        "             Int!Terminate(int).end}}");
  return p;
}

ProtocolDef dns_protocol() {
  ProtocolDef p;
  p.name = "dns";
  p.initiator = "Client";
  p.roles["Client"] = T("LocalDNS!RequestIP(int).LocalDNS&ResponseIP(int).end");
  p.roles["LocalDNS"] =
      T("Client&RequestIP(int).RootDNS!RequestRoot(int)."
        "RootDNS&ResponseRoot(int).TLDDNS!RequestTLD(int)."
        "TLDDNS&ResponseTLD(int).AuthDNS!RequestAuth(int)."
        "AuthDNS&ResponseAuth(int).Client!ResponseIP(int).end");
  p.roles["RootDNS"] =
      T("LocalDNS&RequestRoot(int).LocalDNS!ResponseRoot(int).end");
  p.roles["TLDDNS"] =
      T("LocalDNS&RequestTLD(int).LocalDNS!ResponseTLD(int).end");
  p.roles["AuthDNS"] =
      T("LocalDNS&RequestAuth(int).LocalDNS!ResponseAuth(int).end");
  return p;
}

ProtocolDef auction_protocol() {
  ProtocolDef p;
  p.name = "auction";
  p.initiator = "BuyerA";
  p.roles["Auction"] =
      T("rec X.BuyerA&Bid(int).BuyerB&Bid(int)."
        "+{BuyerA!Resend(int).BuyerB!Resend(int).X,"
        "  BuyerA!Winner(int).BuyerA&Pay(int).BuyerA!SendItem(int).end,"
        "  BuyerB!Winner(int).BuyerB&Pay(int).BuyerB!SendItem(int).end}");
  const char* buyer =
      "rec X.Auction!Bid(int).Auction&{Resend(int).X,"
      "Winner(int).Auction!Pay(int).Auction&SendItem(int).end}";
  p.roles["BuyerA"] = T(buyer);
  p.roles["BuyerB"] = T(buyer);
  return p;
}

ProtocolDef cdn_protocol() {
  ProtocolDef p;
  p.name = "cdn";
  p.initiator = "User";
  p.roles["User"] =
      T("LocalDNS!DNSQuery(int).LocalDNS&IPAddr(int)."
        "ExtServer!ContentRequest(int).ExtServer&Content(int).end");
  p.roles["LocalDNS"] =
      T("User&DNSQuery(int).IntServer!AuthQuery(int).IntServer&Hostname(int)."
        "ExtServer!AuthQuery(int).ExtServer&IPAddr(int).User!IPAddr(int).end");
  p.roles["IntServer"] =
      T("LocalDNS&AuthQuery(int).LocalDNS!Hostname(int)."
        "ExtServer&CacheQuery(int).ExtServer!CacheResponse(int).end");
  p.roles["ExtServer"] =
      T("LocalDNS&AuthQuery(int).LocalDNS!IPAddr(int)."
        "User&ContentRequest(int).IntServer!CacheQuery(int)."
        "IntServer&CacheResponse(int).User!Content(int).end");
  return p;
}

ProtocolDef sip_protocol() {
  ProtocolDef p;
  p.name = "sip";
  p.initiator = "ClientA";
  p.roles["ClientA"] =
      T("Proxy!INVITE(int).Proxy&{Trying(int)."
        "Proxy&{Ringing(int).Proxy&{OK(int).end, Error(int).end},"
        "       Error(int).end}, Error(int).end}");
  p.roles["ClientB"] =
      T("Proxy&INVITE(int).+{Proxy!Ringing(int)."
        "+{Proxy!OK(int).end, Proxy!Error(int).end}, Proxy!Error(int).end}");
  p.roles["Proxy"] =
      T("ClientA&INVITE(int).+{ClientB!INVITE(int).ClientA!Trying(int)."
        "ClientB&{Ringing(int).ClientA!Ringing(int)."
        "  ClientB&{OK(int).ClientA!OK(int).end,"
        "           Error(int).ClientA!Error(int).end},"
        "Error(int).ClientA!Error(int).end}, ClientA!Error(int).end}");
  return p;
}

ProtocolDef pop3_protocol() {
  ProtocolDef p;
  p.name = "pop3";
  p.initiator = "Client";
  p.roles["Client"] =
      T("rec X.Server!Username(int).Server&{ERR(int).X, OK(int)."
        "Server!Password(int).Server&{ERR(int).X, OK(int).rec Y."
        "+{Server!ListMsgs(int).Server&Messages(int).Y,"
        "  Server!Retransmit(int).Server&{OK(int).Y, ERR(int).Y},"
        "  Server!Delete(int).Server&{OK(int).Y, ERR(int).Y},"
        "  Server!NoOp(int).Server&OK(int).Y,"
        "  Server!Quit(int).end}}}");
  p.roles["Server"] =
      T("rec X.Client&Username(int).+{Client!ERR(int).X, Client!OK(int)."
        "Client&Password(int).+{Client!ERR(int).X, Client!OK(int).rec Y."
        "Client&{ListMsgs(int).Client!Messages(int).Y,"
        "  Retransmit(int).+{Client!OK(int).Y, Client!ERR(int).Y},"
        "  Delete(int).+{Client!OK(int).Y, Client!ERR(int).Y},"
        "  NoOp(int).Client!OK(int).Y,"
        "  Quit(int).end}}}");
  return p;
}

ProtocolDef game_protocol() {
  ProtocolDef p;
  p.name = "game";
  p.initiator = "Player1";
  p.roles["Coordinator"] =
      T("Player1&LookForGame(int).Player2&LookForGame(int)."
        "Player1!GameFound(int).Player2!GameFound(int)."
        "GameServer!GameFound(int).end");
  p.roles["GameServer"] =
      T("Coordinator&GameFound(int).rec X."
        "+{Player1!TurnStart(int).Player1&TakeAction(int)."
        "  Player2!TurnStart(int).Player2&TakeAction(int).X,"
        "  Player1!Victory(int).Player2!Defeat(int).end,"
        "  Player1!Defeat(int).Player2!Victory(int).end}");
  const char* player =
      "Coordinator!LookForGame(int).Coordinator&GameFound(int).rec X."
      "GameServer&{TurnStart(int).GameServer!TakeAction(int).X,"
      "            Victory(int).end, Defeat(int).end}";
  p.roles["Player1"] = T(player);
  p.roles["Player2"] = T(player);
  return p;
}

// ---- scenario presets ----------------------------------------------------

Scenario book_scenario(Preset p, std::uint64_t seed) {
  Scenario sc = base_scenario(book_protocol(), p, seed);
  fill_sessions(sc, preset_lossy(p) ? 5 : 100, {}, preset_faulty(p));
  sc.fault = FaultSpec{"Info", 0, "Review", "d_req", 1};
  return sc;
}

Scenario store_scenario(Preset p, std::uint64_t seed) {
  Scenario sc = base_scenario(store_protocol(), p, seed);
  SessionScript s;
  s.picks["Client"] = rep("HTTP", "ConfirmOrder", 2);
  s.picks["Payment"] = {{"HTTP", "InvalidCC"}, {"HTTP", "ValidCC"}};
  fill_sessions(sc, preset_lossy(p) ? 5 : 100, s, preset_faulty(p));
  sc.fault = FaultSpec{"Client", 1, "HTTP", "PlaceOrder", 1};
  return sc;
}

Scenario vpn_scenario(Preset p, std::uint64_t seed) {
  Scenario sc = base_scenario(vpn_protocol(), p, seed);
  // The wide preset runs one denied round and long request phases; the
  // session-closing presets use a short correct prefix before the deviation.
  bool wide = p == Preset::UdpCorrect || p == Preset::UdpFaulty ||
              p == Preset::TcpCorrect;
  int d = wide ? 1 : 0, kb = wide ? 6 : 5, kc = wide ? 5 : 1;
  int n = preset_lossy(p) ? 5 : (wide ? 50 : 75);
  SessionScript s;
  s.picks["Auth"] = rep("ClientA", "Deny", d, {{"ClientA", "Accept"}});
  s.picks["ClientA"] =
      rep("ClientB", "ClientRequest", kb, {{"ClientB", "Terminate"}});
  Picks tail = rep("ClientC", "ClientRequest", kc, {{"ClientC", "Terminate"}});
  s.picks["ClientA"].insert(s.picks["ClientA"].end(), tail.begin(), tail.end());
  fill_sessions(sc, n, s, preset_faulty(p));
  // deviation: mid-phase, ClientB tries to tear the tunnel down directly
  sc.fault = FaultSpec{"ClientB", wide ? 6 : 5, "ClientA", "Terminate", 3};
  return sc;
}

Scenario firewall_scenario(Preset p, std::uint64_t seed) {
  Scenario sc = base_scenario(firewall_protocol(), p, seed);
  int k = 10, k2 = 10;
  int n = preset_lossy(p) ? 5 : (p == Preset::TcpFaulty ? 25 : 50);
  SessionScript s;
  s.picks["Int"] = rep("Ext", "Request", k, {{"Ext", "Terminate"}});
  s.picks["Ext"] = rep("Int", "Request", k2, {{"Int", "Terminate"}});
  fill_sessions(sc, n, s, preset_faulty(p));
  // deviation: the inside host answers during its own request phase
  sc.fault = FaultSpec{"Int", 1, "Ext", "Response", 10};
  return sc;
}

Scenario dns_scenario(Preset p, std::uint64_t seed) {
  Scenario sc = base_scenario(dns_protocol(), p, seed);
  fill_sessions(sc, preset_lossy(p) ? 5 : 100, {}, preset_faulty(p));
  // deviation: the TLD server replies with the root server's label
  sc.fault = FaultSpec{"TLDDNS", 0, "LocalDNS", "ResponseRoot", 1};
  return sc;
}

Scenario auction_scenario(Preset p, std::uint64_t seed) {
  Scenario sc = base_scenario(auction_protocol(), p, seed);
  auto script = [](int rounds) {
    SessionScript s;
    s.picks["Auction"] =
        rep("BuyerA", "Resend", rounds, {{"BuyerA", "Winner"}});
    return s;
  };
  if (p == Preset::UdpCorrect || p == Preset::UdpFaulty ||
      p == Preset::TcpCorrect) {
    // 75 six-round auctions and 25 five-round ones
    fill_sessions(sc, 100, script(6), preset_faulty(p));
    for (int i = 75; i < 100; ++i)
      sc.sessions[static_cast<std::size_t>(i)].picks =
          script(5).picks;
    // deviation: BuyerA pays while the bidding is still open
    sc.fault = FaultSpec{"BuyerA", 1, "Auction", "Pay", 2};
  } else {
    fill_sessions(sc, preset_lossy(p) ? 5 : 120, script(0), preset_faulty(p));
    // deviation: BuyerA bids again after the auction was decided
    sc.fault = FaultSpec{"BuyerA", 1, "Auction", "Bid", 2};
  }
  return sc;
}

Scenario cdn_scenario(Preset p, std::uint64_t seed) {
  Scenario sc = base_scenario(cdn_protocol(), p, seed);
  fill_sessions(sc, preset_lossy(p) ? 5 : 50, {}, preset_faulty(p));
  // deviation: the edge server probes the cache before resolving
  sc.fault = FaultSpec{"ExtServer", 0, "LocalDNS", "CacheQuery", 2};
  return sc;
}

Scenario sip_scenario(Preset p, std::uint64_t seed) {
  Scenario sc = base_scenario(sip_protocol(), p, seed);
  SessionScript s;
  s.picks["Proxy"] = {{"ClientB", "INVITE"}};
  s.picks["ClientB"] = {{"Proxy", "Ringing"}, {"Proxy", "OK"}};
  int n = preset_lossy(p) ? 5 : (p == Preset::TcpFaulty ? 200 : 50);
  fill_sessions(sc, n, s, preset_faulty(p));
  // deviation: the proxy confirms the call before it was even forwarded
  sc.fault = FaultSpec{"Proxy", 0, "ClientA", "OK", 3};
  return sc;
}

Scenario pop3_scenario(Preset p, std::uint64_t seed) {
  Scenario sc = base_scenario(pop3_protocol(), p, seed);
  auto script = [](int q) {
    SessionScript s;
    s.picks["Client"] = rep("Server", "ListMsgs", q, {{"Server", "Quit"}});
    s.picks["Server"] = {{"Client", "OK"}, {"Client", "OK"}};
    return s;
  };
  if (p == Preset::UdpCorrect || p == Preset::UdpFaulty ||
      p == Preset::TcpCorrect) {
    // half the clients list three times, half twice
    fill_sessions(sc, 100, script(3), preset_faulty(p));
    for (int i = 50; i < 100; ++i)
      sc.sessions[static_cast<std::size_t>(i)].picks = script(2).picks;
  } else {
    fill_sessions(sc, preset_lossy(p) ? 5 : 125, script(2), preset_faulty(p));
  }
  // deviation: the client sends the server's listing back at it
  sc.fault = FaultSpec{"Client", 2, "Server", "Messages", 5};
  return sc;
}

Scenario game_scenario(Preset p, std::uint64_t seed) {
  Scenario sc = base_scenario(game_protocol(), p, seed);
  SessionScript s;
  s.picks["GameServer"] =
      rep("Player1", "TurnStart", 2, {{"Player1", "Victory"}});
  if (p == Preset::UdpCorrect || p == Preset::UdpFaulty ||
      p == Preset::TcpCorrect) {
    fill_sessions(sc, 200, s, false);
    if (p == Preset::UdpFaulty)  // 125 of the 200 matches misbehave
      for (int i = 0; i < 125; ++i)
        sc.sessions[static_cast<std::size_t>(i)].faulty = true;
  } else {
    fill_sessions(sc, preset_lossy(p) ? 5 : 100, s, preset_faulty(p));
  }
  // deviation: Player2 re-queues for matchmaking mid-game
  sc.fault = FaultSpec{"Player2", 1, "GameServer", "LookForGame", 2};
  return sc;
}

struct Entry {
  const char* name;
  ProtocolDef (*protocol)();
  Scenario (*scenario)(Preset, std::uint64_t);
  // pinned benchmark counts: accepted for the correct presets, rejected for
  // UdpFaulty, accepted-before-close for TcpFaulty
  long correct_accepted;
  long faulty_rejected;
  long tcp_faulty_accepted;
};

const Entry kCorpus[] = {
    {"vpn", vpn_protocol, vpn_scenario, 1950, 150, 1125},
    {"book", book_protocol, book_scenario, 800, 100, 100},
    {"store", store_protocol, store_scenario, 1800, 100, 400},
    {"firewall", firewall_protocol, firewall_scenario, 2100, 500, 50},
    {"dns", dns_protocol, dns_scenario, 800, 100, 400},
    {"auction", auction_protocol, auction_scenario, 2800, 200, 360},
    {"cdn", cdn_protocol, cdn_scenario, 500, 100, 200},
    {"sip", sip_protocol, sip_scenario, 350, 150, 200},
    {"pop3", pop3_protocol, pop3_scenario, 1000, 500, 500},
    {"game", game_protocol, game_scenario, 3000, 250, 800},
};

const Entry& find_entry(const std::string& name) {
  for (const Entry& e : kCorpus)
    if (name == e.name) return e;
  throw std::invalid_argument("unknown corpus protocol: " + name);
}

}  // namespace

std::string to_string(Preset p) {
  switch (p) {
    case Preset::UdpCorrect: return "udp-correct";
    case Preset::UdpFaulty: return "udp-faulty";
    case Preset::TcpCorrect: return "tcp-correct";
    case Preset::TcpFaulty: return "tcp-faulty";
    case Preset::LossyCorrect: return "lossy-correct";
    case Preset::LossyFaulty: return "lossy-faulty";
  }
  return "?";
}

Preset parse_preset(const std::string& s) {
  for (Preset p : {Preset::UdpCorrect, Preset::UdpFaulty, Preset::TcpCorrect,
                   Preset::TcpFaulty, Preset::LossyCorrect,
                   Preset::LossyFaulty})
    if (s == to_string(p)) return p;
  throw std::invalid_argument("unknown preset: " + s);
}

const std::vector<std::string>& corpus_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const Entry& e : kCorpus) v.emplace_back(e.name);
    return v;
  }();
  return names;
}

ProtocolDef corpus_protocol(const std::string& name) {
  return find_entry(name).protocol();
}

Scenario corpus_scenario(const std::string& name, Preset p,
                         std::uint64_t seed) {
  return find_entry(name).scenario(p, seed);
}

ExpectedStats corpus_expected(const std::string& name, Preset p) {
  const Entry& e = find_entry(name);
  switch (p) {
    case Preset::UdpCorrect:
    case Preset::TcpCorrect:
      return {e.correct_accepted, 0, 0};
    case Preset::UdpFaulty:
      return {e.correct_accepted, e.faulty_rejected, 0};
    case Preset::TcpFaulty:
      return {e.tcp_faulty_accepted, -1, -1};
    case Preset::LossyCorrect:
    case Preset::LossyFaulty:
      return {};
  }
  return {};
}

}  // namespace stmon
