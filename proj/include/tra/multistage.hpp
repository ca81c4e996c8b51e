#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "tra/cost_model.hpp"
#include "tra/game.hpp"
#include "tra/rng.hpp"

namespace tra {

// Nondecreasing map R -> [0,1] with limits 0 and 1; argument is a counter
// difference.
using SigmaFn = std::function<double(long long)>;

SigmaFn logistic_sigma();              // 1 / (1 + e^-x)
SigmaFn constant_sigma(double value);  // degenerate, for tests

enum class InitialSet { Empty, Full, Random, Explicit };

struct MultistageConfig {
  int cm = 10;                      // cost memory (stages)
  SigmaFn sigma = logistic_sigma();
  int max_stages = 200;
  int stability_window = 50;        // consecutive stable stages for detection
  InitialSet initial_set = InitialSet::Empty;
  AttackerSet explicit_set;         // used when initial_set == Explicit
  // Attribute each stage's cost change to the node's membership during the
  // stage whose cost is evaluated (A(k)). When true, attribute to the
  // previous stage's membership (A(k-1)) instead; see README for why the
  // realized-behavior attribution is the default.
  bool previous_stage_attribution = false;
};

struct NodeCounters {
  long long lose = 0;
  long long dont_lose = 0;
  long long mind = 0;
  long long dont_mind = 0;

  long long total() const { return lose + dont_lose + mind + dont_mind; }
};

class MultistageState {
 public:
  MultistageState(const GameInstance& instance, const MultistageConfig& config,
                  const AttackerSet& initial, const CostTable* table = nullptr);

  int stage() const { return stage_; }
  const AttackerSet& attackers() const { return attackers_; }
  const std::vector<NodeCounters>& counters() const { return counters_; }
  const std::vector<Rational>& current_costs() const { return costs_; }
  bool satisfied(NodeId i) const { return satisfied_[static_cast<std::size_t>(i)] != 0; }
  int dissatisfied_count() const;

  // Advance one stage of the multistage strategy; per-node chance events are
  // drawn in ascending node order from `rng`.
  void step(Rng& rng);

 private:
  std::vector<Rational> eval_costs(const AttackerSet& a) const;
  void refresh_satisfaction();

  const GameInstance* instance_;
  const CostTable* table_;
  MultistageConfig config_;
  int stage_ = 0;
  AttackerSet attackers_;
  std::vector<NodeCounters> counters_;
  std::vector<Rational> costs_;
  std::vector<std::vector<Rational>> history_;  // per node, depth <= cm+1
  std::vector<std::uint8_t> satisfied_;
};

// Satisfaction test on a standalone cost history: history holds the node's
// costs for stages max(0, k-cm)..k in order; satisfied iff k >= cm and the
// last entry is <= every one of the previous cm entries.
bool satisfied(std::span<const Rational> history, int k, int cm);

struct StageRecord {
  AttackerSet attackers;
  int attacker_count = 0;
  int dissatisfied = 0;
  std::vector<double> costs;  // normalized, for emission
};

struct RunTrace {
  std::vector<StageRecord> stages;  // stage 0 .. K
  AttackerSet initial_set;
  AttackerSet final_set;
  std::optional<AttackerSet> quasi_equilibrium;  // set iff converged

  bool converged() const { return quasi_equilibrium.has_value(); }
  // Quasi-equilibrium if converged, final stage's set otherwise.
  const AttackerSet& asymptotic_set() const {
    return quasi_equilibrium ? *quasi_equilibrium : final_set;
  }
};

// Run the multistage strategy until max_stages or until the attacker set is
// unchanged and all nodes satisfied for stability_window consecutive stages.
RunTrace run(const GameInstance& instance, const MultistageConfig& config,
             Rng& rng, const CostTable* table = nullptr);

// The quasi-equilibrium of a completed trace: the final attacker set if it
// was unchanged with all nodes satisfied for the last stability_window
// stages, std::nullopt otherwise.
std::optional<AttackerSet> detect_quasi_equilibrium(const RunTrace& trace,
                                                    int stability_window);

enum class AsymptoteRule { QuasiEquilibriumOrFinal, FinalStage };

// Percentage of runs whose asymptotic set is a delta-NE.
double ne_hits(const GameInstance& instance, std::span<const RunTrace> runs,
               double delta,
               AsymptoteRule rule = AsymptoteRule::QuasiEquilibriumOrFinal,
               const CostTable* table = nullptr);

// (initial beneficiary %, asymptotic beneficiary %), averaged over runs.
std::pair<double, double> effectiveness(const GameInstance& instance,
                                        std::span<const RunTrace> runs,
                                        const CostTable* table = nullptr);

// Counts of nodes with a profitable unilateral deviation from a_inf that is
// harmless to their own side: attackers whose departure lowers their cost
// without lowering any remaining attacker's, and neutral nodes whose joining
// lowers their cost without raising any remaining neutral's.
std::pair<int, int> anomalous_nodes(const GameInstance& instance,
                                    const AttackerSet& a_inf,
                                    const CostTable* table = nullptr);

}  // namespace tra
