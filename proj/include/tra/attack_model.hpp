#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tra/net_model.hpp"

namespace tra {

// A strategy profile: the set of opportunistic attackers, as a bitset over
// node ids (supported for |N| <= 64).
class AttackerSet {
 public:
  AttackerSet() = default;
  explicit AttackerSet(int n, std::uint64_t bits = 0);
  static AttackerSet empty(int n) { return AttackerSet(n); }
  static AttackerSet full(int n);
  static AttackerSet of(int n, std::initializer_list<NodeId> members);

  int universe_size() const { return n_; }
  std::uint64_t bits() const { return bits_; }
  bool contains(NodeId i) const { return (bits_ >> i) & 1u; }
  int count() const;
  AttackerSet with_flipped(NodeId i) const;

  std::vector<NodeId> members() const;
  // Comma-separated 1-based node labels, e.g. "1,3,8,9"; empty set -> "".
  std::string str() const;
  static AttackerSet parse(std::string_view text, int n);

  friend bool operator==(const AttackerSet&, const AttackerSet&) = default;

 private:
  std::uint64_t bits_ = 0;
  int n_ = 0;
};

// Per-hop view of a flow at its transmitter, carrying the possibly remapped
// access category. Identity is (transmitter, flow_id).
struct HFlow {
  NodeId transmitter = 0;
  int flow_id = 0;
  AccessCategory hac = AccessCategory::BE;

  friend bool operator==(const HFlow&, const HFlow&) = default;
  friend auto operator<=>(const HFlow& a, const HFlow& b) {
    if (auto c = a.transmitter <=> b.transmitter; c != 0) return c;
    return a.flow_id <=> b.flow_id;
  }
};

struct TraEvent {
  enum class Kind { Upgrade, Downgrade };
  NodeId node = 0;
  Kind kind = Kind::Upgrade;

  friend bool operator==(const TraEvent&, const TraEvent&) = default;
};

// Closed-form per-hop access category under attacker set `a`:
//   intrinsic BE: VO iff the source attacks and no intermediate node up to
//                 and including i attacks;
//   intrinsic VO: VO iff no intermediate node up to and including i attacks.
AccessCategory hac(const E2eFlow& flow, NodeId i, const AttackerSet& a);

// Same, by hop index (0-based position of the transmitter on the route).
AccessCategory hac_at_hop(const E2eFlow& flow, int hop, const AttackerSet& a);

// Oracle for the closed form: applies each node's mapping along the route
// (source may upgrade its own BE flow, attacker forwarders downgrade
// arriving VO transit, destinations stay neutral). Returns the transmitted
// access category at each of the route's length-1 hops.
std::vector<AccessCategory> simulate_per_hop_mapping(const E2eFlow& flow,
                                                     const AttackerSet& a);

// TRA events a flow experiences: at most one upgrade (at the source of a BE
// flow) and at most one downgrade (at the first attacker forwarder reached
// while the flow still carries VO).
std::vector<TraEvent> tra_events(const E2eFlow& flow, const AttackerSet& a);

// "TRA+ at 8 & TRA- at 3" rendering (1-based labels; "" for no events).
std::string render_tra_events(const std::vector<TraEvent>& events);

}  // namespace tra
