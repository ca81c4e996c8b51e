#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tra/rng.hpp"

namespace tra {

using NodeId = int;

enum class AccessCategory : std::uint8_t { VO, BE };

inline const char* to_string(AccessCategory ac) {
  return ac == AccessCategory::VO ? "VO" : "BE";
}
AccessCategory ac_from_string(std::string_view s);

// Hearability topology over nodes 0..n-1. hears(i, j) means j is in the
// hearability range of i, i.e. there is a directed edge i -> j. Generated
// topologies are symmetric; loaded fixtures may be asymmetric.
class Topology {
 public:
  Topology(int n, std::vector<std::uint8_t> adjacency);

  int size() const { return n_; }
  bool hears(NodeId i, NodeId j) const {
    return adjacency_[static_cast<std::size_t>(i) * n_ + j] != 0;
  }
  // Bitmask of {j : hears(j, i)} (nodes whose range covers i).
  std::uint64_t in_mask(NodeId i) const { return in_mask_[i]; }

  bool symmetric() const;
  bool connected() const;  // in the undirected sense (edge in either direction)
  int undirected_edge_count() const;

  friend bool operator==(const Topology&, const Topology&) = default;

 private:
  int n_ = 0;
  std::vector<std::uint8_t> adjacency_;  // row-major n*n
  std::vector<std::uint64_t> in_mask_;
};

// Text format: an n x n grid of {0,1,-} tokens, '-' only on the diagonal.
// An optional header row (column labels) and row labels are tolerated.
Topology parse_topology(std::string_view text);
std::string render_topology(const Topology& t);

// Symmetric connected topology; each unordered pair carries an edge with
// probability edge_prob, rejection-sampled until connected.
Topology random_topology(int n, double edge_prob, Rng& rng);

// A directed route: distinct nodes, every consecutive pair a hearability
// edge, length >= 2.
class Route {
 public:
  Route(std::vector<NodeId> nodes, const Topology& topology);

  int length() const { return static_cast<int>(nodes_.size()); }
  NodeId source() const { return nodes_.front(); }
  NodeId destination() const { return nodes_.back(); }
  NodeId operator[](int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  const std::vector<NodeId>& nodes() const { return nodes_; }
  bool contains(NodeId i) const;
  // Position of i on the route; -1 if absent.
  int index_of(NodeId i) const;

  friend bool operator==(const Route&, const Route&) = default;

 private:
  std::vector<NodeId> nodes_;
};

// Self-avoiding random walk of exactly `length` nodes, uniform next-hop
// choice, restart on dead end. Retry budget 10*n*length.
Route random_route(const Topology& t, int length, Rng& rng);
Route random_route_from(const Topology& t, NodeId source, int length, Rng& rng);

struct E2eFlow {
  int id = 0;
  Route route;
  AccessCategory ac = AccessCategory::BE;

  friend bool operator==(const E2eFlow&, const E2eFlow&) = default;
};

class FlowSet {
 public:
  explicit FlowSet(std::vector<E2eFlow> flows);

  const std::vector<E2eFlow>& flows() const { return flows_; }
  int size() const { return static_cast<int>(flows_.size()); }
  const E2eFlow& operator[](int i) const {
    return flows_[static_cast<std::size_t>(i)];
  }
  const E2eFlow& by_id(int id) const;

  // Whether every node of the topology sources at least one flow.
  bool every_node_sources(const Topology& t) const;

  friend bool operator==(const FlowSet&, const FlowSet&) = default;

 private:
  std::vector<E2eFlow> flows_;
};

enum class TrafficPattern { FlowSparse, FlowDense };

struct TrafficOptions {
  int min_length = 2;
  int max_length = 5;
  // FlowSparse only: assign VO to alternating nodes 0,2,4,... instead of a
  // random half (reproduces the bundled fixtures' layout).
  bool fixture_layout = false;
};

// FlowSparse: one flow per source node, ceil(n/2) of them VO.
// FlowDense: two flows per source node, one VO and one BE.
FlowSet generate_traffic(const Topology& t, TrafficPattern pattern,
                         const TrafficOptions& opts, Rng& rng);

// Text format: one flow per line, "id;n1 n2 ... nk;VO|BE" with 1-based
// node labels.
FlowSet parse_flows(std::string_view text, const Topology& t);
std::string render_flows(const FlowSet& flows);

}  // namespace tra
