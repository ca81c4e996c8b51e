#include "tra/fixtures.hpp"

#include <sstream>

#include "tra/game.hpp"

namespace tra {

namespace {

constexpr const char* kSparseTopology = R"(
- 0 1 1 0 1 0 0 0 1
0 - 1 0 1 0 0 1 0 0
1 1 - 0 1 0 1 1 1 1
1 0 0 - 1 1 1 1 0 0
0 1 1 1 - 0 0 1 1 0
1 0 0 1 0 - 0 1 0 0
0 0 1 1 0 0 - 1 1 1
0 1 1 1 1 1 1 - 0 0
0 0 1 0 1 0 1 0 - 0
1 0 1 0 0 0 1 0 0 -
)";

constexpr const char* kSparseFlows = R"(
1;1 3 9 5 4;VO
2;2 8 3;BE
3;3 10 7 4 5;VO
4;4 8;BE
5;5 8 6 1 10;VO
6;6 8;BE
7;7 8 6 4 5;VO
8;8 3 2;BE
9;9 7 3 5 2;VO
10;10 1 4;BE
)";

constexpr const char* kDenseTopology = R"(
- 0 1 0 1 1 0 1 0 1
0 - 1 1 0 1 0 1 0 1
1 1 - 1 1 1 1 1 1 1
0 1 1 - 1 0 1 1 0 1
1 0 1 1 - 1 1 1 1 1
1 1 1 0 1 - 0 1 1 0
0 0 1 1 1 0 - 1 0 1
1 1 1 1 1 1 1 - 0 0
0 0 1 0 1 1 0 0 - 0
1 1 1 1 1 0 1 0 0 -
)";

constexpr const char* kDenseFlows = R"(
1;1 3 9 5 4;VO
2;1 8 3;BE
3;2 10 7 4 5;VO
4;2 8;BE
5;3 8 6 1 10;VO
6;3 8;BE
7;4 7 8 6 5;VO
8;4 3 2;BE
9;5 7 3 2 4;VO
10;5 1;BE
11;6 3 9;VO
12;6 1;BE
13;7 5 8 1 3;VO
14;7 8 5;BE
15;8 4 10 3 2;VO
16;8 2 6;BE
17;9 5 8 7 10;VO
18;9 6;BE
19;10 5 3 6 2;VO
20;10 4;BE
)";

GameInstance build(const char* topo_text, const char* flow_text) {
  Topology t = parse_topology(topo_text);
  FlowSet f = parse_flows(flow_text, t);
  return GameInstance(std::move(t), std::move(f));
}

}  // namespace

GameInstance fixture_flow_sparse() {
  return build(kSparseTopology, kSparseFlows);
}

GameInstance fixture_flow_dense() { return build(kDenseTopology, kDenseFlows); }

AttackerSet fixture_attackers() {
  return AttackerSet::of(10, {0, 2, 7, 8});  // labels 1,3,8,9
}

const std::vector<std::string>& fixture_sparse_annotations() {
  static const std::vector<std::string> kExpected = {
      "TRA- at 3", "", "", "", "TRA- at 8", "", "TRA- at 8",
      "TRA+ at 8 & TRA- at 3", "TRA- at 3", "",
  };
  return kExpected;
}

const std::vector<std::string>& fixture_dense_annotations() {
  static const std::vector<std::string> kExpected = {
      "TRA- at 3", "TRA+ at 1 & TRA- at 8", "", "", "TRA- at 8",
      "TRA+ at 3", "TRA- at 8", "", "TRA- at 3", "",
      "TRA- at 3", "", "TRA- at 8", "", "TRA- at 3",
      "TRA+ at 8", "TRA- at 8", "TRA+ at 9", "TRA- at 3", "",
  };
  return kExpected;
}

namespace {

std::vector<CostCell> make_cells(
    std::initializer_list<std::pair<long long, NodeState>> rows) {
  std::vector<CostCell> out;
  int node = 0;
  for (const auto& [pct, state] : rows) out.push_back({node++, pct, state});
  return out;
}

constexpr NodeState kL = NodeState::Lose;
constexpr NodeState kDL = NodeState::DontLose;
constexpr NodeState kM = NodeState::Mind;
constexpr NodeState kDM = NodeState::DontMind;

}  // namespace

const std::vector<CostCell>& fixture_cost_cells_sparse_ref() {
  static const std::vector<CostCell> kCells = make_cells({
      {133, kL}, {-40, kDM}, {-40, kDL}, {-49, kDM}, {104, kM},
      {-49, kDM}, {131, kM}, {-41, kDL}, {89, kL}, {-46, kDM},
  });
  return kCells;
}

const std::vector<CostCell>& fixture_cost_cells_dense_ref() {
  static const std::vector<CostCell> kCells = make_cells({
      {11, kL}, {-34, kDM}, {-26, kDL}, {-2, kDM}, {2, kM},
      {11, kM}, {-1, kDM}, {-50, kDL}, {-28, kDL}, {8, kM},
  });
  return kCells;
}

const std::vector<CostCell>& fixture_cost_cells_sparse_all() {
  static const std::vector<CostCell> kCells = make_cells({
      {124, kL}, {-52, kDL}, {135, kL}, {-91, kDL}, {141, kL},
      {-91, kDL}, {149, kL}, {-46, kDL}, {147, kL}, {-52, kDL},
  });
  return kCells;
}

const std::vector<CostCell>& fixture_cost_cells_dense_all() {
  static const std::vector<CostCell> kCells = make_cells({
      {-8, kDL}, {-34, kDL}, {-37, kDL}, {-5, kDL}, {-34, kDL},
      {-36, kDL}, {-6, kDL}, {-7, kDL}, {-20, kDL}, {-24, kDL},
  });
  return kCells;
}

namespace {

void check_annotations(const GameInstance& instance,
                       const std::vector<std::string>& expected,
                       FixtureCheckResult& result) {
  const AttackerSet a = fixture_attackers();
  for (int fi = 0; fi < instance.flows().size(); ++fi) {
    const auto& f = instance.flows()[fi];
    const std::string got = render_tra_events(tra_events(f, a));
    ++result.cells_total;
    if (got == expected[static_cast<std::size_t>(fi)]) {
      ++result.cells_matched;
    } else {
      result.ok = false;
      std::ostringstream msg;
      msg << "flow " << f.id << ": expected \""
          << expected[static_cast<std::size_t>(fi)] << "\" computed \"" << got
          << "\"";
      result.mismatches.push_back(msg.str());
    }
  }
}

void check_cost_cells(const GameInstance& instance, const AttackerSet& a,
                      const std::vector<CostCell>& expected, const char* tag,
                      FixtureCheckResult& result) {
  const auto costs = instance.costs(a);
  for (const auto& cell : expected) {
    const Rational& c = costs[static_cast<std::size_t>(cell.node)];
    const long long pct = c.percent_change();
    const NodeState state = classify_node(a.contains(cell.node), c);
    ++result.cells_total;
    if (pct == cell.change_pct && state == cell.state) {
      ++result.cells_matched;
    } else {
      result.ok = false;
      std::ostringstream msg;
      msg << tag << " node " << cell.node + 1 << ": expected "
          << cell.change_pct << "% " << to_string(cell.state) << " computed "
          << pct << "% " << to_string(state);
      result.mismatches.push_back(msg.str());
    }
  }
}

}  // namespace

FixtureCheckResult reproduce_fixture(FixtureTable table) {
  FixtureCheckResult result;
  switch (table) {
    case FixtureTable::AnnotationsSparse:
      check_annotations(fixture_flow_sparse(), fixture_sparse_annotations(),
                        result);
      break;
    case FixtureTable::AnnotationsDense:
      check_annotations(fixture_flow_dense(), fixture_dense_annotations(),
                        result);
      break;
    case FixtureTable::CostTable: {
      const GameInstance sparse = fixture_flow_sparse();
      const GameInstance dense = fixture_flow_dense();
      const AttackerSet ref = fixture_attackers();
      check_cost_cells(sparse, ref, fixture_cost_cells_sparse_ref(),
                       "sparse/ref", result);
      check_cost_cells(dense, ref, fixture_cost_cells_dense_ref(), "dense/ref",
                       result);
      check_cost_cells(sparse, AttackerSet::full(10),
                       fixture_cost_cells_sparse_all(), "sparse/all", result);
      check_cost_cells(dense, AttackerSet::full(10),
                       fixture_cost_cells_dense_all(), "dense/all", result);
      break;
    }
  }
  return result;
}

}  // namespace tra
