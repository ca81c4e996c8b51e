#pragma once

#include <cstdint>
#include <vector>

#include "tra/attack_model.hpp"
#include "tra/net_model.hpp"
#include "tra/rational.hpp"

namespace tra {

struct RankParams {
  int alpha = 40;
  int beta = 10;
};

struct CostParams {
  int gamma_vo = 2;  // gamma_be is fixed at 1
};

struct CompetitionCount {
  int vo = 0;
  int be = 0;
};

// Per-hop badness score, lower is better:
//   1{hac=BE} * alpha * (vo + 1{vo>1 or be>2}) + beta * (vo + 1{hac=BE}) + be
int rank(AccessCategory hac, const CompetitionCount& counts,
         const RankParams& params);

// Outgoing h-flows at node i: one per flow that visits i before its last
// position, carrying the remapped category. Sorted by (transmitter, flow id).
std::vector<HFlow> outgoing_hflows(const FlowSet& flows, const AttackerSet& a,
                                   NodeId i);

// Competing h-flows of h (which must be an outgoing h-flow at its
// transmitter t with successor succ on its route):
//   - other outgoing h-flows at t (shared transmission queue),
//   - outgoing h-flows of every j with an edge j -> t (carrier sensing),
//   - outgoing h-flows of every j != t with an edge j -> succ but no edge
//     j -> t (hidden from t, colliding at the receiver).
std::vector<HFlow> competing_hflows(const Topology& t, const FlowSet& flows,
                                    const AttackerSet& a, const HFlow& h);

CompetitionCount count_competition(const std::vector<HFlow>& ch);

// Immutable cost oracle: topology + flows + parameters with the all-neutral
// nodal costs cached. Construction requires every node to source at least
// one flow and every baseline nodal cost to be positive.
class GameInstance {
 public:
  GameInstance(Topology topology, FlowSet flows, RankParams rank_params = {},
               CostParams cost_params = {});

  const Topology& topology() const { return topology_; }
  const FlowSet& flows() const { return flows_; }
  const RankParams& rank_params() const { return rank_params_; }
  const CostParams& cost_params() const { return cost_params_; }
  int node_count() const { return topology_.size(); }
  const std::vector<Rational>& baseline() const { return baseline_; }

  // Flow cost: mean per-hop rank for VO flows, max for BE flows.
  Rational flowcost(const AttackerSet& a, int flow_id) const;
  // Weighted sum of the node's source flows' costs (gamma_vo per VO flow).
  Rational nodalcost(const AttackerSet& a, NodeId i) const;
  // Nodal cost normalized to the all-neutral profile.
  Rational cost(const AttackerSet& a, NodeId i) const;
  // All nodes' normalized costs in one pass.
  std::vector<Rational> costs(const AttackerSet& a) const;

  std::vector<HFlow> outgoing_hflows(const AttackerSet& a, NodeId i) const {
    return tra::outgoing_hflows(flows_, a, i);
  }
  std::vector<HFlow> competing_hflows(const AttackerSet& a,
                                      const HFlow& h) const {
    return tra::competing_hflows(topology_, flows_, a, h);
  }

 private:
  struct Hop {
    int flow_index = 0;
    NodeId transmitter = 0;
    std::uint64_t competitor_mask = 0;  // nodes whose OH competes with this hop
    std::uint64_t prefix_mask = 0;      // intermediate nodes up to and incl. t
  };

  std::vector<Rational> nodalcosts(const AttackerSet& a) const;
  void per_hop_categories(const AttackerSet& a,
                          std::vector<std::uint8_t>& hac_be) const;

  Topology topology_;
  FlowSet flows_;
  RankParams rank_params_;
  CostParams cost_params_;
  std::vector<Hop> hops_;                 // all hops, grouped by flow
  std::vector<std::pair<int, int>> flow_hop_range_;  // [first, last) into hops_
  std::vector<std::vector<int>> source_flows_;       // node -> flow indices
  std::vector<Rational> baseline_;

  friend class CostTable;
};

// Precomputed normalized costs for every attacker set, built in Gray-code
// order so successive profiles differ by one node. Usable for n <= 20.
class CostTable {
 public:
  explicit CostTable(const GameInstance& instance);

  const GameInstance& instance() const { return *instance_; }
  const Rational& cost(std::uint64_t profile_bits, NodeId i) const {
    return table_[profile_bits * n_ + static_cast<std::uint64_t>(i)];
  }
  const Rational* row(std::uint64_t profile_bits) const {
    return &table_[profile_bits * n_];
  }

 private:
  const GameInstance* instance_;
  std::uint64_t n_ = 0;
  std::vector<Rational> table_;
};

}  // namespace tra
