#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tra/cost_model.hpp"

namespace tra {

enum class NodeState { Lose, DontLose, Mind, DontMind };
const char* to_string(NodeState s);

enum class NeMode { Weak, Strict };
enum class NeStatus { Strict, Weak, None };
const char* to_string(NeStatus s);

enum class ParetoOrder { ASuperior, BSuperior, Equivalent, Incomparable };
const char* to_string(ParetoOrder o);

// A with node i's membership toggled.
AttackerSet flip(const AttackerSet& a, NodeId i);

// Weak: no unilateral flip strictly lowers the flipper's cost.
// Strict: every unilateral flip strictly raises it.
bool is_nash(const GameInstance& instance, const AttackerSet& a, NeMode mode);

// Number of nodes whose unilateral flip strictly lowers their own cost.
int delta_violations(const GameInstance& instance, const AttackerSet& a);

// floor(delta * n), with a guard against binary-representation error.
int delta_threshold(int n, double delta);

struct ProfileAnalysis {
  AttackerSet attacker_set;
  std::vector<Rational> costs;
  std::vector<NodeState> classification;
  NeStatus ne_status = NeStatus::None;
  int violated_count = 0;
};

ProfileAnalysis analyze_profile(const GameInstance& instance,
                                const AttackerSet& a);

// Attackers with increased cost are Lose (else DontLose); neutral nodes with
// increased cost are Mind (else DontMind). "Increased" is cost > 1 exactly.
std::vector<NodeState> classify_nodes(const GameInstance& instance,
                                      const AttackerSet& a);
NodeState classify_node(bool attacker, const Rational& cost);

// Whether a node state counts as beneficiary (DontLose or DontMind).
inline bool is_beneficiary(NodeState s) {
  return s == NodeState::DontLose || s == NodeState::DontMind;
}

ParetoOrder pareto_compare(const GameInstance& instance, const AttackerSet& a,
                           const AttackerSet& b);

// All profiles with at most floor(delta*n) violated inequalities, ascending
// by attacker count, then by numeric value. Exhaustive over 2^n profiles;
// refuses n beyond `exhaustive_bound`.
std::vector<AttackerSet> enumerate_ne(const GameInstance& instance,
                                      double delta,
                                      int exhaustive_bound = 24);

// Table-backed variants (reuse a prebuilt CostTable across queries).
int delta_violations(const CostTable& table, std::uint64_t profile_bits);
std::vector<AttackerSet> enumerate_ne(const CostTable& table, double delta);

}  // namespace tra
