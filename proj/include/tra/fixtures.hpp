#pragma once

#include <string>
#include <vector>

#include "tra/cost_model.hpp"
#include "tra/game.hpp"

namespace tra {

// Built-in 10-node reference instances with known expected outputs: one
// flow-sparse (one flow per node) and one flow-dense (a VO and a BE flow
// per node), both with the reference attacker set {1,3,8,9} (1-based).
GameInstance fixture_flow_sparse();
GameInstance fixture_flow_dense();
AttackerSet fixture_attackers();  // {1,3,8,9}, 1-based labels

// Expected remapping annotations per flow, e.g. "TRA+ at 8 & TRA- at 3".
const std::vector<std::string>& fixture_sparse_annotations();
const std::vector<std::string>& fixture_dense_annotations();

struct CostCell {
  int node = 0;             // 0-based
  long long change_pct = 0; // integer percent
  NodeState state = NodeState::DontMind;
};

// Expected cost-change table cells for both instances under the reference
// attacker set and under the all-attackers profile.
const std::vector<CostCell>& fixture_cost_cells_sparse_ref();
const std::vector<CostCell>& fixture_cost_cells_dense_ref();
const std::vector<CostCell>& fixture_cost_cells_sparse_all();
const std::vector<CostCell>& fixture_cost_cells_dense_all();

enum class FixtureTable { AnnotationsSparse, AnnotationsDense, CostTable };

struct FixtureCheckResult {
  bool ok = true;
  int cells_total = 0;
  int cells_matched = 0;
  std::vector<std::string> mismatches;  // "expected ... computed ..." lines
};

// Recompute the fixture outputs and compare cell by cell.
FixtureCheckResult reproduce_fixture(FixtureTable table);

}  // namespace tra
