#include "tra/attack_model.hpp"

#include <bit>
#include <sstream>
#include <stdexcept>

namespace tra {

AttackerSet::AttackerSet(int n, std::uint64_t bits) : bits_(bits), n_(n) {
  if (n < 0 || n > 64)
    throw std::invalid_argument("attacker set: universe must be 0..64 nodes");
  if (n < 64 && (bits >> n) != 0)
    throw std::invalid_argument("attacker set: member out of range");
}

AttackerSet AttackerSet::full(int n) {
  return AttackerSet(n, n == 64 ? ~0ULL : (1ULL << n) - 1);
}

AttackerSet AttackerSet::of(int n, std::initializer_list<NodeId> members) {
  std::uint64_t bits = 0;
  for (NodeId i : members) {
    if (i < 0 || i >= n)
      throw std::invalid_argument("attacker set: member out of range");
    bits |= 1ULL << i;
  }
  return AttackerSet(n, bits);
}

int AttackerSet::count() const { return std::popcount(bits_); }

AttackerSet AttackerSet::with_flipped(NodeId i) const {
  if (i < 0 || i >= n_)
    throw std::invalid_argument("attacker set: node out of range");
  return AttackerSet(n_, bits_ ^ (1ULL << i));
}

std::vector<NodeId> AttackerSet::members() const {
  std::vector<NodeId> out;
  for (int i = 0; i < n_; ++i)
    if (contains(i)) out.push_back(i);
  return out;
}

std::string AttackerSet::str() const {
  std::string out;
  for (NodeId i : members()) {
    if (!out.empty()) out += ',';
    out += std::to_string(i + 1);
  }
  return out;
}

AttackerSet AttackerSet::parse(std::string_view text, int n) {
  std::uint64_t bits = 0;
  std::string tok;
  std::istringstream in{std::string(text)};
  while (std::getline(in, tok, ',')) {
    if (tok.find_first_not_of(" \t") == std::string::npos) continue;
    const int label = std::stoi(tok);
    if (label < 1 || label > n)
      throw std::invalid_argument("attacker set: node label out of range: " +
                                  tok);
    bits |= 1ULL << (label - 1);
  }
  return AttackerSet(n, bits);
}

AccessCategory hac_at_hop(const E2eFlow& flow, int hop, const AttackerSet& a) {
  const auto& r = flow.route;
  if (hop < 0 || hop >= r.length() - 1)
    throw std::invalid_argument("hac: hop index out of range");
  bool intermediate_attacked = false;
  for (int k = 1; k <= hop; ++k)
    if (a.contains(r[k])) {
      intermediate_attacked = true;
      break;
    }
  if (flow.ac == AccessCategory::BE)
    return (a.contains(r.source()) && !intermediate_attacked)
               ? AccessCategory::VO
               : AccessCategory::BE;
  return intermediate_attacked ? AccessCategory::BE : AccessCategory::VO;
}

AccessCategory hac(const E2eFlow& flow, NodeId i, const AttackerSet& a) {
  const int pos = flow.route.index_of(i);
  if (pos < 0)
    throw std::invalid_argument("hac: node " + std::to_string(i + 1) +
                                " not on route");
  if (pos == flow.route.length() - 1)
    throw std::invalid_argument("hac: node " + std::to_string(i + 1) +
                                " is the destination");
  return hac_at_hop(flow, pos, a);
}

std::vector<AccessCategory> simulate_per_hop_mapping(const E2eFlow& flow,
                                                     const AttackerSet& a) {
  const auto& r = flow.route;
  std::vector<AccessCategory> transmitted;
  transmitted.reserve(static_cast<std::size_t>(r.length() - 1));

  // Source: an attacker upgrades its own BE flow; it never downgrades its
  // own VO flow (plausibility).
  AccessCategory current = flow.ac;
  if (a.contains(r.source()) && current == AccessCategory::BE)
    current = AccessCategory::VO;
  transmitted.push_back(current);

  // Forwarders: an attacker downgrades arriving VO transit; upgrading
  // transit is never plausible. The destination applies no mapping.
  for (int k = 1; k < r.length() - 1; ++k) {
    if (a.contains(r[k]) && current == AccessCategory::VO)
      current = AccessCategory::BE;
    transmitted.push_back(current);
  }
  return transmitted;
}

std::vector<TraEvent> tra_events(const E2eFlow& flow, const AttackerSet& a) {
  const auto& r = flow.route;
  std::vector<TraEvent> events;
  AccessCategory current = flow.ac;
  if (flow.ac == AccessCategory::BE && a.contains(r.source())) {
    events.push_back({r.source(), TraEvent::Kind::Upgrade});
    current = AccessCategory::VO;
  }
  for (int k = 1; k < r.length() - 1; ++k) {
    if (a.contains(r[k]) && current == AccessCategory::VO) {
      events.push_back({r[k], TraEvent::Kind::Downgrade});
      current = AccessCategory::BE;
      break;  // later downgrades are no-ops
    }
  }
  return events;
}

std::string render_tra_events(const std::vector<TraEvent>& events) {
  std::string out;
  for (const auto& e : events) {
    if (!out.empty()) out += " & ";
    out += e.kind == TraEvent::Kind::Upgrade ? "TRA+ at " : "TRA- at ";
    out += std::to_string(e.node + 1);
  }
  return out;
}

}  // namespace tra
