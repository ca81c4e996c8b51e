#include "tra/cost_model.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace tra {

int rank(AccessCategory hac, const CompetitionCount& counts,
         const RankParams& params) {
  const int vo = counts.vo;
  const int be = counts.be;
  const int congested = (vo > 1 || be > 2) ? 1 : 0;
  const int is_be = hac == AccessCategory::BE ? 1 : 0;
  return is_be * params.alpha * (vo + congested) + params.beta * (vo + is_be) +
         be;
}

std::vector<HFlow> outgoing_hflows(const FlowSet& flows, const AttackerSet& a,
                                   NodeId i) {
  std::vector<HFlow> out;
  for (const auto& f : flows.flows()) {
    const int pos = f.route.index_of(i);
    if (pos < 0 || pos == f.route.length() - 1) continue;
    out.push_back({i, f.id, hac_at_hop(f, pos, a)});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<HFlow> competing_hflows(const Topology& t, const FlowSet& flows,
                                    const AttackerSet& a, const HFlow& h) {
  const E2eFlow& flow = flows.by_id(h.flow_id);
  const int pos = flow.route.index_of(h.transmitter);
  if (pos < 0 || pos == flow.route.length() - 1)
    throw std::invalid_argument(
        "competing_hflows: h is not an outgoing h-flow of its transmitter");
  const NodeId tx = h.transmitter;
  const NodeId succ = flow.route[pos + 1];

  // Queue competitors at the transmitter, minus the h-flow itself.
  std::vector<HFlow> ch;
  for (const auto& o : outgoing_hflows(flows, a, tx))
    if (o.flow_id != h.flow_id) ch.push_back(o);

  // Carrier-sensing and hidden-node competitors: every j with an edge into
  // the transmitter, plus every j != tx reaching the receiver but not the
  // transmitter. Their outgoing sets are disjoint across j, so no dedupe is
  // needed beyond skipping the transmitter itself.
  const std::uint64_t mask =
      (t.in_mask(tx) | t.in_mask(succ)) & ~(1ULL << tx);
  for (int j = 0; j < t.size(); ++j) {
    if (!((mask >> j) & 1u)) continue;
    for (const auto& o : outgoing_hflows(flows, a, j)) ch.push_back(o);
  }
  std::sort(ch.begin(), ch.end());
  return ch;
}

CompetitionCount count_competition(const std::vector<HFlow>& ch) {
  CompetitionCount c;
  for (const auto& h : ch)
    (h.hac == AccessCategory::VO ? c.vo : c.be) += 1;
  return c;
}

GameInstance::GameInstance(Topology topology, FlowSet flows,
                           RankParams rank_params, CostParams cost_params)
    : topology_(std::move(topology)),
      flows_(std::move(flows)),
      rank_params_(rank_params),
      cost_params_(cost_params) {
  if (rank_params_.alpha < 0 || rank_params_.beta < 1)
    throw std::invalid_argument("rank params: need alpha >= 0, beta >= 1");
  if (cost_params_.gamma_vo <= 1)
    throw std::invalid_argument("cost params: need gamma_vo > 1");

  const int n = topology_.size();
  source_flows_.assign(static_cast<std::size_t>(n), {});
  for (int fi = 0; fi < flows_.size(); ++fi) {
    const auto& f = flows_[fi];
    const auto& r = f.route;
    if (r.destination() >= n || r.source() >= n)
      throw std::invalid_argument("instance: route node out of range");
    source_flows_[static_cast<std::size_t>(r.source())].push_back(fi);
    const int first = static_cast<int>(hops_.size());
    std::uint64_t prefix = 0;
    for (int k = 0; k + 1 < r.length(); ++k) {
      const NodeId tx = r[k];
      const NodeId succ = r[k + 1];
      if (k > 0) prefix |= 1ULL << tx;
      Hop hop;
      hop.flow_index = fi;
      hop.transmitter = tx;
      hop.prefix_mask = prefix;
      hop.competitor_mask =
          (topology_.in_mask(tx) | topology_.in_mask(succ)) & ~(1ULL << tx);
      hops_.push_back(hop);
    }
    flow_hop_range_.emplace_back(first, static_cast<int>(hops_.size()));
  }

  for (int i = 0; i < n; ++i)
    if (source_flows_[static_cast<std::size_t>(i)].empty())
      throw std::invalid_argument("instance: node " + std::to_string(i + 1) +
                                  " sources no flow");

  baseline_ = nodalcosts(AttackerSet::empty(n));
  for (int i = 0; i < n; ++i)
    if (baseline_[static_cast<std::size_t>(i)] == Rational(0))
      throw std::invalid_argument("instance: node " + std::to_string(i + 1) +
                                  " has a zero all-neutral cost");
}

void GameInstance::per_hop_categories(const AttackerSet& a,
                                      std::vector<std::uint8_t>& hac_be) const {
  hac_be.resize(hops_.size());
  const std::uint64_t bits = a.bits();
  for (int fi = 0; fi < flows_.size(); ++fi) {
    const auto& f = flows_[fi];
    const bool src_attacks = (bits >> f.route.source()) & 1u;
    const auto [first, last] = flow_hop_range_[static_cast<std::size_t>(fi)];
    for (int k = first; k < last; ++k) {
      const bool clean = (bits & hops_[static_cast<std::size_t>(k)].prefix_mask) == 0;
      bool is_vo;
      if (f.ac == AccessCategory::BE)
        is_vo = src_attacks && clean;
      else
        is_vo = clean;
      hac_be[static_cast<std::size_t>(k)] = is_vo ? 0 : 1;
    }
  }
}

std::vector<Rational> GameInstance::nodalcosts(const AttackerSet& a) const {
  const int n = topology_.size();
  std::vector<std::uint8_t> hac_be;
  per_hop_categories(a, hac_be);

  std::vector<int> vo_cnt(static_cast<std::size_t>(n), 0);
  std::vector<int> be_cnt(static_cast<std::size_t>(n), 0);
  for (std::size_t k = 0; k < hops_.size(); ++k) {
    const NodeId tx = hops_[k].transmitter;
    if (hac_be[k])
      ++be_cnt[static_cast<std::size_t>(tx)];
    else
      ++vo_cnt[static_cast<std::size_t>(tx)];
  }

  std::vector<Rational> nodal(static_cast<std::size_t>(n), Rational(0));
  for (int fi = 0; fi < flows_.size(); ++fi) {
    const auto& f = flows_[fi];
    const auto [first, last] = flow_hop_range_[static_cast<std::size_t>(fi)];
    long long sum = 0;
    long long best = 0;
    for (int k = first; k < last; ++k) {
      const Hop& hop = hops_[static_cast<std::size_t>(k)];
      CompetitionCount c;
      c.vo = vo_cnt[static_cast<std::size_t>(hop.transmitter)];
      c.be = be_cnt[static_cast<std::size_t>(hop.transmitter)];
      if (hac_be[static_cast<std::size_t>(k)])
        --c.be;
      else
        --c.vo;
      std::uint64_t m = hop.competitor_mask;
      while (m) {
        const int j = std::countr_zero(m);
        m &= m - 1;
        c.vo += vo_cnt[static_cast<std::size_t>(j)];
        c.be += be_cnt[static_cast<std::size_t>(j)];
      }
      const AccessCategory hc = hac_be[static_cast<std::size_t>(k)]
                                    ? AccessCategory::BE
                                    : AccessCategory::VO;
      const int r = rank(hc, c, rank_params_);
      sum += r;
      best = std::max<long long>(best, r);
    }
    const Rational fc = f.ac == AccessCategory::VO
                            ? Rational(sum, last - first)
                            : Rational(best);
    const int gamma = f.ac == AccessCategory::VO ? cost_params_.gamma_vo : 1;
    nodal[static_cast<std::size_t>(f.route.source())] += fc * Rational(gamma);
  }
  return nodal;
}

Rational GameInstance::flowcost(const AttackerSet& a, int flow_id) const {
  const E2eFlow& f = flows_.by_id(flow_id);
  Rational total(0);
  long long best = 0;
  int hops = 0;
  for (int k = 0; k + 1 < f.route.length(); ++k) {
    const HFlow h{f.route[k], f.id, hac_at_hop(f, k, a)};
    const auto ch = tra::competing_hflows(topology_, flows_, a, h);
    const int r = rank(h.hac, count_competition(ch), rank_params_);
    total += Rational(r);
    best = std::max<long long>(best, r);
    ++hops;
  }
  return f.ac == AccessCategory::VO ? total / Rational(hops) : Rational(best);
}

Rational GameInstance::nodalcost(const AttackerSet& a, NodeId i) const {
  if (i < 0 || i >= topology_.size())
    throw std::invalid_argument("nodalcost: node out of range");
  return nodalcosts(a)[static_cast<std::size_t>(i)];
}

Rational GameInstance::cost(const AttackerSet& a, NodeId i) const {
  return nodalcost(a, i) / baseline_[static_cast<std::size_t>(i)];
}

std::vector<Rational> GameInstance::costs(const AttackerSet& a) const {
  std::vector<Rational> out = nodalcosts(a);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] /= baseline_[i];
  return out;
}

CostTable::CostTable(const GameInstance& instance)
    : instance_(&instance),
      n_(static_cast<std::uint64_t>(instance.node_count())) {
  const int n = instance.node_count();
  if (n > 20)
    throw std::invalid_argument("cost table: supported for n <= 20 only");
  const std::uint64_t profiles = 1ULL << n;
  table_.resize(profiles * n_);
  // Gray-code walk over the profile space: successive profiles differ in a
  // single node, so the per-hop category vector could be updated
  // incrementally; at these sizes the one-pass evaluation is already cheap
  // and stays on the shared code path.
  for (std::uint64_t g = 0; g < profiles; ++g) {
    const std::uint64_t profile = g ^ (g >> 1);
    const auto costs = instance.costs(AttackerSet(n, profile));
    std::copy(costs.begin(), costs.end(), table_.begin() + profile * n_);
  }
}

}  // namespace tra
