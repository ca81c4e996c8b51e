#include "tra/game.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace tra {

const char* to_string(NodeState s) {
  switch (s) {
    case NodeState::Lose: return "lose";
    case NodeState::DontLose: return "dont_lose";
    case NodeState::Mind: return "mind";
    case NodeState::DontMind: return "dont_mind";
  }
  return "?";
}

const char* to_string(NeStatus s) {
  switch (s) {
    case NeStatus::Strict: return "strict";
    case NeStatus::Weak: return "weak";
    case NeStatus::None: return "none";
  }
  return "?";
}

const char* to_string(ParetoOrder o) {
  switch (o) {
    case ParetoOrder::ASuperior: return "a_superior";
    case ParetoOrder::BSuperior: return "b_superior";
    case ParetoOrder::Equivalent: return "equivalent";
    case ParetoOrder::Incomparable: return "incomparable";
  }
  return "?";
}

AttackerSet flip(const AttackerSet& a, NodeId i) { return a.with_flipped(i); }

bool is_nash(const GameInstance& instance, const AttackerSet& a, NeMode mode) {
  const auto own = instance.costs(a);
  for (int i = 0; i < instance.node_count(); ++i) {
    const Rational deviated = instance.cost(flip(a, i), i);
    if (mode == NeMode::Weak) {
      if (own[static_cast<std::size_t>(i)] > deviated) return false;
    } else {
      if (own[static_cast<std::size_t>(i)] >= deviated) return false;
    }
  }
  return true;
}

int delta_violations(const GameInstance& instance, const AttackerSet& a) {
  const auto own = instance.costs(a);
  int count = 0;
  for (int i = 0; i < instance.node_count(); ++i)
    if (own[static_cast<std::size_t>(i)] > instance.cost(flip(a, i), i))
      ++count;
  return count;
}

int delta_threshold(int n, double delta) {
  if (delta < 0.0 || delta > 1.0)
    throw std::invalid_argument("delta must be in [0,1]");
  return static_cast<int>(std::floor(delta * n + 1e-9));
}

NodeState classify_node(bool attacker, const Rational& cost) {
  const bool increased = cost > Rational(1);
  if (attacker) return increased ? NodeState::Lose : NodeState::DontLose;
  return increased ? NodeState::Mind : NodeState::DontMind;
}

std::vector<NodeState> classify_nodes(const GameInstance& instance,
                                      const AttackerSet& a) {
  const auto c = instance.costs(a);
  std::vector<NodeState> out(c.size());
  for (int i = 0; i < instance.node_count(); ++i)
    out[static_cast<std::size_t>(i)] =
        classify_node(a.contains(i), c[static_cast<std::size_t>(i)]);
  return out;
}

ProfileAnalysis analyze_profile(const GameInstance& instance,
                                const AttackerSet& a) {
  ProfileAnalysis out;
  out.attacker_set = a;
  out.costs = instance.costs(a);
  out.classification.resize(out.costs.size());
  bool strict = true;
  for (int i = 0; i < instance.node_count(); ++i) {
    out.classification[static_cast<std::size_t>(i)] =
        classify_node(a.contains(i), out.costs[static_cast<std::size_t>(i)]);
    const Rational deviated = instance.cost(flip(a, i), i);
    if (out.costs[static_cast<std::size_t>(i)] > deviated) ++out.violated_count;
    if (out.costs[static_cast<std::size_t>(i)] >= deviated) strict = false;
  }
  out.ne_status = out.violated_count > 0
                      ? NeStatus::None
                      : (strict ? NeStatus::Strict : NeStatus::Weak);
  return out;
}

ParetoOrder pareto_compare(const GameInstance& instance, const AttackerSet& a,
                           const AttackerSet& b) {
  const auto ca = instance.costs(a);
  const auto cb = instance.costs(b);
  bool a_better = false;
  bool b_better = false;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (ca[i] < cb[i]) a_better = true;
    if (cb[i] < ca[i]) b_better = true;
  }
  if (a_better && b_better) return ParetoOrder::Incomparable;
  if (a_better) return ParetoOrder::ASuperior;
  if (b_better) return ParetoOrder::BSuperior;
  return ParetoOrder::Equivalent;
}

namespace {

std::vector<AttackerSet> sort_profiles(std::vector<AttackerSet> found) {
  std::sort(found.begin(), found.end(),
            [](const AttackerSet& x, const AttackerSet& y) {
              if (x.count() != y.count()) return x.count() < y.count();
              return x.bits() < y.bits();
            });
  return found;
}

}  // namespace

int delta_violations(const CostTable& table, std::uint64_t profile_bits) {
  const int n = table.instance().node_count();
  const Rational* own = table.row(profile_bits);
  int count = 0;
  for (int i = 0; i < n; ++i)
    if (own[i] > table.cost(profile_bits ^ (1ULL << i), i)) ++count;
  return count;
}

std::vector<AttackerSet> enumerate_ne(const CostTable& table, double delta) {
  const int n = table.instance().node_count();
  const int threshold = delta_threshold(n, delta);
  std::vector<AttackerSet> found;
  for (std::uint64_t p = 0; p < (1ULL << n); ++p)
    if (delta_violations(table, p) <= threshold)
      found.push_back(AttackerSet(n, p));
  return sort_profiles(std::move(found));
}

std::vector<AttackerSet> enumerate_ne(const GameInstance& instance,
                                      double delta, int exhaustive_bound) {
  const int n = instance.node_count();
  if (n > exhaustive_bound)
    throw std::invalid_argument(
        "enumerate_ne: instance exceeds the exhaustive bound of " +
        std::to_string(exhaustive_bound) + " nodes");
  if (n <= 20) return enumerate_ne(CostTable(instance), delta);

  const int threshold = delta_threshold(n, delta);
  std::vector<AttackerSet> found;
  for (std::uint64_t p = 0; p < (1ULL << n); ++p) {
    const AttackerSet a(n, p);
    if (delta_violations(instance, a) <= threshold) found.push_back(a);
  }
  return sort_profiles(std::move(found));
}

}  // namespace tra
