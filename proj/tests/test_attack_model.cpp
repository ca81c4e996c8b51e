#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tra/fixtures.hpp"
#include "tra/net_model.hpp"

using namespace tra;

namespace {

const E2eFlow& flow(const GameInstance& inst, int id) {
  return inst.flows().by_id(id);
}

// Exhaustively compare the closed-form per-hop category with the
// per-node mapping simulation for every flow, hop and attacker set.
void check_oracle_equivalence(const GameInstance& inst) {
  const int n = inst.node_count();
  for (std::uint64_t bits = 0; bits < (1ULL << n); ++bits) {
    const AttackerSet a(n, bits);
    for (const auto& f : inst.flows().flows()) {
      const auto simulated = simulate_per_hop_mapping(f, a);
      REQUIRE(static_cast<int>(simulated.size()) == f.route.length() - 1);
      for (int k = 0; k + 1 < f.route.length(); ++k)
        REQUIRE(simulated[static_cast<std::size_t>(k)] == hac_at_hop(f, k, a));
    }
  }
}

}  // namespace

TEST_CASE("attacker set basics") {
  const AttackerSet a = AttackerSet::of(10, {0, 2, 7, 8});
  CHECK(a.count() == 4);
  CHECK(a.str() == "1,3,8,9");
  CHECK(AttackerSet::parse("1,3,8,9", 10) == a);
  CHECK(AttackerSet::parse("", 10) == AttackerSet::empty(10));
  CHECK(AttackerSet::full(10).count() == 10);
  CHECK_THROWS(AttackerSet::parse("11", 10));
  CHECK_THROWS(AttackerSet::of(4, {7}));
}

TEST_CASE("hac on the flow-sparse fixture") {
  const GameInstance inst = fixture_flow_sparse();
  const AttackerSet a = fixture_attackers();

  // flow 1 (route 1 3 9 5 4, VO): VO at the source, BE afterwards
  const E2eFlow& f1 = flow(inst, 1);
  CHECK(hac(f1, 0, a) == AccessCategory::VO);
  CHECK(hac(f1, 2, a) == AccessCategory::BE);
  CHECK(hac(f1, 8, a) == AccessCategory::BE);
  CHECK(hac(f1, 4, a) == AccessCategory::BE);

  // flow 8 (route 8 3 2, BE): upgraded at 8, downgraded at 3
  const E2eFlow& f8 = flow(inst, 8);
  CHECK(hac(f8, 7, a) == AccessCategory::VO);
  CHECK(hac(f8, 2, a) == AccessCategory::BE);

  CHECK_THROWS(hac(f1, 3, a));  // node 4 is the destination
  CHECK_THROWS(hac(f1, 6, a));  // node 7 is not on the route
}

TEST_CASE("hac with no attackers is the intrinsic category") {
  const GameInstance inst = fixture_flow_dense();
  const AttackerSet none = AttackerSet::empty(10);
  for (const auto& f : inst.flows().flows())
    for (int k = 0; k + 1 < f.route.length(); ++k)
      CHECK(hac_at_hop(f, k, none) == f.ac);
}

TEST_CASE("per-hop mapping simulation agrees with the closed form") {
  check_oracle_equivalence(fixture_flow_sparse());
  check_oracle_equivalence(fixture_flow_dense());
}

TEST_CASE("all-attackers delivery of long VO flows ends as BE") {
  const GameInstance inst = fixture_flow_sparse();
  const AttackerSet all = AttackerSet::full(10);
  for (const auto& f : inst.flows().flows()) {
    if (f.route.length() <= 2) continue;
    const auto simulated = simulate_per_hop_mapping(f, all);
    CHECK(simulated.back() == AccessCategory::BE);
  }
}

TEST_CASE("length-2 VO flow is never downgraded") {
  const Topology t = parse_topology("- 1\n1 -\n");
  const E2eFlow f{1, Route({0, 1}, t), AccessCategory::VO};
  for (std::uint64_t bits = 0; bits < 4; ++bits) {
    const auto simulated = simulate_per_hop_mapping(f, AttackerSet(2, bits));
    CHECK(simulated == std::vector<AccessCategory>{AccessCategory::VO});
  }
}

TEST_CASE("tra_events on the fixtures") {
  const AttackerSet a = fixture_attackers();
  {
    const GameInstance inst = fixture_flow_sparse();
    // flow 5 (route 5 8 6 1 10, VO): only the first attacker forwarder acts
    const auto ev5 = tra_events(flow(inst, 5), a);
    REQUIRE(ev5.size() == 1);
    CHECK(ev5[0] == TraEvent{7, TraEvent::Kind::Downgrade});
    // flow 3 has an attacker source but plausibility forbids the downgrade
    CHECK(tra_events(flow(inst, 3), a).empty());
    // expected annotation strings for the whole table
    const auto& expected = fixture_sparse_annotations();
    for (int fi = 0; fi < inst.flows().size(); ++fi)
      CHECK(render_tra_events(tra_events(inst.flows()[fi], a)) ==
            expected[static_cast<std::size_t>(fi)]);
  }
  {
    const GameInstance inst = fixture_flow_dense();
    // flow 2 (route 1 8 3, BE): upgrade at the source then downgrade at 8
    const auto ev2 = tra_events(flow(inst, 2), a);
    REQUIRE(ev2.size() == 2);
    CHECK(ev2[0] == TraEvent{0, TraEvent::Kind::Upgrade});
    CHECK(ev2[1] == TraEvent{7, TraEvent::Kind::Downgrade});
    const auto& expected = fixture_dense_annotations();
    for (int fi = 0; fi < inst.flows().size(); ++fi)
      CHECK(render_tra_events(tra_events(inst.flows()[fi], a)) ==
            expected[static_cast<std::size_t>(fi)]);
  }
}

TEST_CASE("plausibility and event-count invariants on random instances") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const Topology t = random_topology(7, 0.5, rng);
    const FlowSet flows = generate_traffic(
        t, trial % 2 ? TrafficPattern::FlowDense : TrafficPattern::FlowSparse,
        {}, rng);
    for (int probe = 0; probe < 16; ++probe) {
      const AttackerSet a(7, rng.next_u64() & 0x7f);
      for (const auto& f : flows.flows()) {
        const auto events = tra_events(f, a);
        CHECK(events.size() <= 2);
        if (events.size() == 2) CHECK(f.ac == AccessCategory::BE);
        for (const auto& e : events) {
          CHECK(a.contains(e.node));
          if (e.kind == TraEvent::Kind::Upgrade) {
            CHECK(e.node == f.route.source());
            CHECK(f.ac == AccessCategory::BE);
          } else {
            CHECK(e.node != f.route.source());
            CHECK(e.node != f.route.destination());
          }
        }
        // monotone propagation: once BE, BE at all later hops
        bool seen_be = false;
        for (int k = 0; k + 1 < f.route.length(); ++k) {
          const bool is_be = hac_at_hop(f, k, a) == AccessCategory::BE;
          if (seen_be && f.ac == AccessCategory::VO) CHECK(is_be);
          seen_be = seen_be || is_be;
        }
        // oracle equivalence on the same draw
        const auto sim = simulate_per_hop_mapping(f, a);
        for (int k = 0; k + 1 < f.route.length(); ++k)
          CHECK(sim[static_cast<std::size_t>(k)] == hac_at_hop(f, k, a));
      }
    }
  }
}
