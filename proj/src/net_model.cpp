#include "tra/net_model.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace tra {

AccessCategory ac_from_string(std::string_view s) {
  if (s == "VO") return AccessCategory::VO;
  if (s == "BE") return AccessCategory::BE;
  throw std::invalid_argument("unknown access category: " + std::string(s));
}

Topology::Topology(int n, std::vector<std::uint8_t> adjacency)
    : n_(n), adjacency_(std::move(adjacency)) {
  if (n < 1) throw std::invalid_argument("topology: node count must be >= 1");
  if (n > 64) throw std::invalid_argument("topology: at most 64 nodes supported");
  if (adjacency_.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("topology: adjacency size mismatch");
  for (int i = 0; i < n_; ++i)
    if (hears(i, i))
      throw std::invalid_argument("topology: self-loop at node " +
                                  std::to_string(i + 1));
  in_mask_.assign(static_cast<std::size_t>(n_), 0);
  for (int j = 0; j < n_; ++j)
    for (int i = 0; i < n_; ++i)
      if (hears(i, j)) in_mask_[static_cast<std::size_t>(j)] |= 1ULL << i;
}

bool Topology::symmetric() const {
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (hears(i, j) != hears(j, i)) return false;
  return true;
}

bool Topology::connected() const {
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(n_), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v = 0; v < n_; ++v) {
      if (!seen[static_cast<std::size_t>(v)] && (hears(u, v) || hears(v, u))) {
        seen[static_cast<std::size_t>(v)] = 1;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == n_;
}

int Topology::undirected_edge_count() const {
  int count = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (hears(i, j) || hears(j, i)) ++count;
  return count;
}

namespace {

std::vector<std::vector<std::string>> tokenize_lines(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::istringstream in{std::string(text)};
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string t;
    while (ls >> t) toks.push_back(t);
    if (!toks.empty()) rows.push_back(std::move(toks));
  }
  return rows;
}

bool all_numeric(const std::vector<std::string>& toks) {
  for (const auto& t : toks)
    for (char c : t)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return !toks.empty();
}

}  // namespace

Topology parse_topology(std::string_view text) {
  auto rows = tokenize_lines(text);
  if (rows.empty()) throw std::invalid_argument("topology text: empty input");

  // Optional header row: all-numeric labels and one more row than it has
  // columns.
  if (rows.size() == rows.front().size() + 1 && all_numeric(rows.front()))
    rows.erase(rows.begin());

  const std::size_t n = rows.size();
  // Optional row labels: every row has n+1 tokens and starts with a number.
  bool labeled = n > 0;
  for (const auto& r : rows)
    labeled = labeled && r.size() == n + 1 &&
              all_numeric({r.front()});
  if (labeled)
    for (auto& r : rows) r.erase(r.begin());

  for (const auto& r : rows)
    if (r.size() != n)
      throw std::invalid_argument("topology text: grid is not square");

  std::vector<std::uint8_t> adj(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::string& t = rows[i][j];
      if (t == "-") {
        if (i != j)
          throw std::invalid_argument(
              "topology text: '-' off the diagonal at row " +
              std::to_string(i + 1));
        continue;
      }
      if (t == "1") {
        if (i == j)
          throw std::invalid_argument("topology text: self-loop at node " +
                                      std::to_string(i + 1));
        adj[i * n + j] = 1;
      } else if (t != "0") {
        throw std::invalid_argument("topology text: bad token '" + t + "'");
      }
    }
  }
  return Topology(static_cast<int>(n), std::move(adj));
}

std::string render_topology(const Topology& t) {
  std::string out;
  for (int i = 0; i < t.size(); ++i) {
    for (int j = 0; j < t.size(); ++j) {
      if (j) out += ' ';
      out += (i == j) ? "-" : (t.hears(i, j) ? "1" : "0");
    }
    out += '\n';
  }
  return out;
}

Topology random_topology(int n, double edge_prob, Rng& rng) {
  if (n < 2) throw std::invalid_argument("random_topology: n must be >= 2");
  if (!(edge_prob > 0.0) || edge_prob > 1.0)
    throw std::invalid_argument("random_topology: edge_prob must be in (0,1]");
  for (;;) {
    std::vector<std::uint8_t> adj(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng.bernoulli(edge_prob)) {
          adj[static_cast<std::size_t>(i) * n + j] = 1;
          adj[static_cast<std::size_t>(j) * n + i] = 1;
        }
    Topology t(n, std::move(adj));
    if (t.connected()) return t;
  }
}

Route::Route(std::vector<NodeId> nodes, const Topology& topology)
    : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2)
    throw std::invalid_argument("route: length must be >= 2");
  std::unordered_set<NodeId> seen;
  for (NodeId v : nodes_) {
    if (v < 0 || v >= topology.size())
      throw std::invalid_argument("route: node out of range");
    if (!seen.insert(v).second)
      throw std::invalid_argument("route: repeated node " +
                                  std::to_string(v + 1));
  }
  for (std::size_t k = 0; k + 1 < nodes_.size(); ++k)
    if (!topology.hears(nodes_[k], nodes_[k + 1]))
      throw std::invalid_argument(
          "route: missing edge " + std::to_string(nodes_[k] + 1) + " -> " +
          std::to_string(nodes_[k + 1] + 1));
}

bool Route::contains(NodeId i) const { return index_of(i) >= 0; }

int Route::index_of(NodeId i) const {
  for (std::size_t k = 0; k < nodes_.size(); ++k)
    if (nodes_[k] == i) return static_cast<int>(k);
  return -1;
}

namespace {

std::optional<std::vector<NodeId>> try_walk(const Topology& t, NodeId source,
                                            int length, Rng& rng) {
  std::vector<NodeId> walk{source};
  std::uint64_t visited = 1ULL << source;
  while (static_cast<int>(walk.size()) < length) {
    NodeId cur = walk.back();
    std::vector<NodeId> next;
    for (int v = 0; v < t.size(); ++v)
      if (t.hears(cur, v) && !((visited >> v) & 1u)) next.push_back(v);
    if (next.empty()) return std::nullopt;
    NodeId pick = next[rng.bounded(next.size())];
    walk.push_back(pick);
    visited |= 1ULL << pick;
  }
  return walk;
}

}  // namespace

Route random_route_from(const Topology& t, NodeId source, int length,
                        Rng& rng) {
  if (length < 2 || length > t.size())
    throw std::invalid_argument("random_route: length out of range");
  const int budget = 10 * t.size() * length;
  for (int attempt = 0; attempt < budget; ++attempt) {
    if (auto walk = try_walk(t, source, length, rng))
      return Route(std::move(*walk), t);
  }
  throw std::runtime_error("random_route: no route of length " +
                           std::to_string(length) + " from node " +
                           std::to_string(source + 1) +
                           " (retry budget exhausted)");
}

Route random_route(const Topology& t, int length, Rng& rng) {
  if (length < 2 || length > t.size())
    throw std::invalid_argument("random_route: length out of range");
  const int budget = 10 * t.size() * length;
  for (int attempt = 0; attempt < budget; ++attempt) {
    const NodeId source = static_cast<NodeId>(rng.bounded(t.size()));
    if (auto walk = try_walk(t, source, length, rng))
      return Route(std::move(*walk), t);
  }
  throw std::runtime_error(
      "random_route: retry budget exhausted, no route of length " +
      std::to_string(length));
}

FlowSet::FlowSet(std::vector<E2eFlow> flows) : flows_(std::move(flows)) {
  std::unordered_set<int> ids;
  for (const auto& f : flows_)
    if (!ids.insert(f.id).second)
      throw std::invalid_argument("flow set: duplicate flow id " +
                                  std::to_string(f.id));
}

const E2eFlow& FlowSet::by_id(int id) const {
  for (const auto& f : flows_)
    if (f.id == id) return f;
  throw std::out_of_range("flow set: no flow with id " + std::to_string(id));
}

bool FlowSet::every_node_sources(const Topology& t) const {
  std::vector<std::uint8_t> sourced(static_cast<std::size_t>(t.size()), 0);
  for (const auto& f : flows_)
    sourced[static_cast<std::size_t>(f.route.source())] = 1;
  return std::all_of(sourced.begin(), sourced.end(),
                     [](std::uint8_t b) { return b != 0; });
}

FlowSet generate_traffic(const Topology& t, TrafficPattern pattern,
                         const TrafficOptions& opts, Rng& rng) {
  const int n = t.size();
  const int lo = opts.min_length;
  const int hi = std::min(opts.max_length, n);
  if (lo < 2 || hi < lo)
    throw std::invalid_argument("generate_traffic: bad length range");

  std::vector<E2eFlow> flows;
  int next_id = 1;
  if (pattern == TrafficPattern::FlowSparse) {
    std::vector<std::uint8_t> is_vo(static_cast<std::size_t>(n), 0);
    if (opts.fixture_layout) {
      for (int i = 0; i < n; i += 2) is_vo[static_cast<std::size_t>(i)] = 1;
    } else {
      std::vector<int> order(static_cast<std::size_t>(n));
      std::iota(order.begin(), order.end(), 0);
      for (int i = n - 1; i > 0; --i)
        std::swap(order[static_cast<std::size_t>(i)],
                  order[rng.bounded(static_cast<std::uint64_t>(i) + 1)]);
      for (int k = 0; k < (n + 1) / 2; ++k)
        is_vo[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = 1;
    }
    for (int i = 0; i < n; ++i) {
      const int len = rng.uniform_int(lo, hi);
      flows.push_back({next_id++, random_route_from(t, i, len, rng),
                       is_vo[static_cast<std::size_t>(i)]
                           ? AccessCategory::VO
                           : AccessCategory::BE});
    }
  } else {
    for (int i = 0; i < n; ++i) {
      for (AccessCategory ac : {AccessCategory::VO, AccessCategory::BE}) {
        const int len = rng.uniform_int(lo, hi);
        flows.push_back({next_id++, random_route_from(t, i, len, rng), ac});
      }
    }
  }
  return FlowSet(std::move(flows));
}

FlowSet parse_flows(std::string_view text, const Topology& t) {
  std::vector<E2eFlow> flows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto p1 = line.find(';');
    const auto p2 = line.find(';', p1 == std::string::npos ? p1 : p1 + 1);
    if (p1 == std::string::npos || p2 == std::string::npos)
      throw std::invalid_argument("flow line needs two ';': " + line);
    const int id = std::stoi(line.substr(0, p1));
    std::istringstream rs(line.substr(p1 + 1, p2 - p1 - 1));
    std::vector<NodeId> nodes;
    int label = 0;
    while (rs >> label) nodes.push_back(label - 1);
    std::string ac = line.substr(p2 + 1);
    ac.erase(std::remove_if(ac.begin(), ac.end(),
                            [](unsigned char c) { return std::isspace(c); }),
             ac.end());
    flows.push_back({id, Route(std::move(nodes), t), ac_from_string(ac)});
  }
  return FlowSet(std::move(flows));
}

std::string render_flows(const FlowSet& flows) {
  std::string out;
  for (const auto& f : flows.flows()) {
    out += std::to_string(f.id);
    out += ';';
    for (std::size_t k = 0; k < f.route.nodes().size(); ++k) {
      if (k) out += ' ';
      out += std::to_string(f.route.nodes()[k] + 1);
    }
    out += ';';
    out += to_string(f.ac);
    out += '\n';
  }
  return out;
}

}  // namespace tra
