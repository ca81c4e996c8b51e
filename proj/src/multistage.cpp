#include "tra/multistage.hpp"

#include <cmath>
#include <stdexcept>

namespace tra {

SigmaFn logistic_sigma() {
  return [](long long x) {
    return 1.0 / (1.0 + std::exp(-static_cast<double>(x)));
  };
}

SigmaFn constant_sigma(double value) {
  return [value](long long) { return value; };
}

bool satisfied(std::span<const Rational> history, int k, int cm) {
  if (cm < 1) throw std::invalid_argument("satisfied: cm must be >= 1");
  if (k < cm) return false;
  if (static_cast<int>(history.size()) < cm + 1)
    throw std::invalid_argument("satisfied: insufficient history for k >= cm");
  const Rational& current = history.back();
  for (int l = 1; l <= cm; ++l)
    if (current > history[history.size() - 1 - static_cast<std::size_t>(l)])
      return false;
  return true;
}

MultistageState::MultistageState(const GameInstance& instance,
                                 const MultistageConfig& config,
                                 const AttackerSet& initial,
                                 const CostTable* table)
    : instance_(&instance),
      table_(table),
      config_(config),
      attackers_(initial) {
  if (config_.cm < 1)
    throw std::invalid_argument("multistage: cm must be >= 1");
  if (config_.stability_window < 1)
    throw std::invalid_argument("multistage: stability window must be >= 1");
  const int n = instance.node_count();
  counters_.assign(static_cast<std::size_t>(n), {});
  costs_ = eval_costs(attackers_);
  history_.assign(static_cast<std::size_t>(n), {});
  for (int i = 0; i < n; ++i)
    history_[static_cast<std::size_t>(i)].push_back(
        costs_[static_cast<std::size_t>(i)]);
  satisfied_.assign(static_cast<std::size_t>(n), 0);  // stage 0 < cm
}

std::vector<Rational> MultistageState::eval_costs(const AttackerSet& a) const {
  if (table_) {
    const Rational* row = table_->row(a.bits());
    return std::vector<Rational>(row, row + instance_->node_count());
  }
  return instance_->costs(a);
}

int MultistageState::dissatisfied_count() const {
  int count = 0;
  for (std::uint8_t s : satisfied_)
    if (!s) ++count;
  return count;
}

void MultistageState::step(Rng& rng) {
  const int n = instance_->node_count();
  const AttackerSet previous = attackers_;
  const std::vector<Rational> previous_costs = costs_;

  // Membership update: satisfied nodes keep their behavior; dissatisfied
  // ones flip with a probability driven by their counter excess. One chance
  // draw per node per stage, in ascending node order.
  std::uint64_t bits = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    const NodeCounters& c = counters_[static_cast<std::size_t>(i)];
    const bool sat = satisfied_[static_cast<std::size_t>(i)] != 0;
    if (previous.contains(i)) {
      const bool leave = !sat && u < config_.sigma(c.lose - c.dont_lose);
      if (!leave) bits |= 1ULL << i;
    } else {
      const bool join = !sat && u < config_.sigma(c.mind - c.dont_mind);
      if (join) bits |= 1ULL << i;
    }
  }
  attackers_ = AttackerSet(n, bits);
  costs_ = eval_costs(attackers_);
  ++stage_;

  // Counter update: credit each node's cost change to its behavior. The
  // default credits the behavior in force while the new cost is realized;
  // the alternative credits the previous stage's behavior.
  const AttackerSet& credited =
      config_.previous_stage_attribution ? previous : attackers_;
  for (int i = 0; i < n; ++i) {
    auto& c = counters_[static_cast<std::size_t>(i)];
    const bool increased = costs_[static_cast<std::size_t>(i)] >
                           previous_costs[static_cast<std::size_t>(i)];
    if (credited.contains(i))
      (increased ? c.lose : c.dont_lose) += 1;
    else
      (increased ? c.mind : c.dont_mind) += 1;
  }

  for (int i = 0; i < n; ++i) {
    auto& h = history_[static_cast<std::size_t>(i)];
    h.push_back(costs_[static_cast<std::size_t>(i)]);
    if (static_cast<int>(h.size()) > config_.cm + 1) h.erase(h.begin());
  }
  refresh_satisfaction();
}

void MultistageState::refresh_satisfaction() {
  const int n = instance_->node_count();
  for (int i = 0; i < n; ++i)
    satisfied_[static_cast<std::size_t>(i)] =
        tra::satisfied(history_[static_cast<std::size_t>(i)], stage_,
                       config_.cm)
            ? 1
            : 0;
}

namespace {

AttackerSet initial_set(const GameInstance& instance,
                        const MultistageConfig& config, Rng& rng) {
  const int n = instance.node_count();
  switch (config.initial_set) {
    case InitialSet::Empty:
      return AttackerSet::empty(n);
    case InitialSet::Full:
      return AttackerSet::full(n);
    case InitialSet::Random: {
      const std::uint64_t mask = n == 64 ? ~0ULL : (1ULL << n) - 1;
      return AttackerSet(n, rng.next_u64() & mask);
    }
    case InitialSet::Explicit:
      if (config.explicit_set.universe_size() != n)
        throw std::invalid_argument("multistage: explicit set universe mismatch");
      return config.explicit_set;
  }
  throw std::logic_error("unreachable");
}

StageRecord record_of(const MultistageState& state, int n) {
  StageRecord rec;
  rec.attackers = state.attackers();
  rec.attacker_count = state.attackers().count();
  rec.dissatisfied = state.dissatisfied_count();
  rec.costs.reserve(static_cast<std::size_t>(n));
  for (const auto& c : state.current_costs()) rec.costs.push_back(c.to_double());
  return rec;
}

}  // namespace

RunTrace run(const GameInstance& instance, const MultistageConfig& config,
             Rng& rng, const CostTable* table) {
  RunTrace trace;
  MultistageState state(instance, config, initial_set(instance, config, rng),
                        table);
  trace.initial_set = state.attackers();
  trace.stages.push_back(record_of(state, instance.node_count()));

  int stable = 0;
  for (int k = 1; k <= config.max_stages; ++k) {
    const AttackerSet before = state.attackers();
    state.step(rng);
    trace.stages.push_back(record_of(state, instance.node_count()));
    if (state.attackers() == before && state.dissatisfied_count() == 0)
      ++stable;
    else
      stable = 0;
    if (stable >= config.stability_window) {
      trace.quasi_equilibrium = state.attackers();
      break;
    }
  }
  trace.final_set = state.attackers();
  return trace;
}

std::optional<AttackerSet> detect_quasi_equilibrium(const RunTrace& trace,
                                                    int stability_window) {
  const auto& stages = trace.stages;
  if (static_cast<int>(stages.size()) < stability_window + 1)
    return std::nullopt;
  const std::size_t last = stages.size() - 1;
  for (int w = 0; w < stability_window; ++w) {
    const std::size_t k = last - static_cast<std::size_t>(w);
    if (stages[k].dissatisfied != 0) return std::nullopt;
    if (!(stages[k].attackers == stages[k - 1].attackers)) return std::nullopt;
  }
  return stages[last].attackers;
}

namespace {

const Rational* costs_row(const GameInstance& instance, const CostTable* table,
                          const AttackerSet& a, std::vector<Rational>& scratch) {
  if (table) return table->row(a.bits());
  scratch = instance.costs(a);
  return scratch.data();
}

}  // namespace

double ne_hits(const GameInstance& instance, std::span<const RunTrace> runs,
               double delta, AsymptoteRule rule, const CostTable* table) {
  if (runs.empty()) return 0.0;
  const int n = instance.node_count();
  const int threshold = delta_threshold(n, delta);
  int hits = 0;
  for (const auto& trace : runs) {
    const AttackerSet& a = rule == AsymptoteRule::FinalStage
                               ? trace.final_set
                               : trace.asymptotic_set();
    const int viol = table ? delta_violations(*table, a.bits())
                           : delta_violations(instance, a);
    if (viol <= threshold) ++hits;
  }
  return 100.0 * hits / static_cast<double>(runs.size());
}

std::pair<double, double> effectiveness(const GameInstance& instance,
                                        std::span<const RunTrace> runs,
                                        const CostTable* table) {
  if (runs.empty()) return {0.0, 0.0};
  const int n = instance.node_count();
  double initial = 0.0;
  double asymptotic = 0.0;
  std::vector<Rational> scratch;
  for (const auto& trace : runs) {
    const Rational* c0 = costs_row(instance, table, trace.initial_set, scratch);
    int b0 = 0;
    for (int i = 0; i < n; ++i)
      if (!(c0[i] > Rational(1))) ++b0;
    std::vector<Rational> scratch2;
    const Rational* c1 =
        costs_row(instance, table, trace.asymptotic_set(), scratch2);
    int b1 = 0;
    for (int i = 0; i < n; ++i)
      if (!(c1[i] > Rational(1))) ++b1;
    initial += b0;
    asymptotic += b1;
  }
  const double scale = 100.0 / (static_cast<double>(runs.size()) * n);
  return {initial * scale, asymptotic * scale};
}

std::pair<int, int> anomalous_nodes(const GameInstance& instance,
                                    const AttackerSet& a_inf,
                                    const CostTable* table) {
  const int n = instance.node_count();
  std::vector<Rational> scratch;
  const Rational* base = costs_row(instance, table, a_inf, scratch);
  int attacker_type = 0;
  int neutral_type = 0;
  for (int i = 0; i < n; ++i) {
    const AttackerSet dev = flip(a_inf, i);
    std::vector<Rational> scratch2;
    const Rational* moved = costs_row(instance, table, dev, scratch2);
    if (!(moved[i] < base[i])) continue;
    if (a_inf.contains(i)) {
      // Leaving lowers i's cost without lowering any remaining attacker's.
      bool harmless = true;
      for (int j = 0; j < n && harmless; ++j)
        if (dev.contains(j) && moved[j] < base[j]) harmless = false;
      if (harmless) ++attacker_type;
    } else {
      // Joining lowers i's cost without raising any remaining neutral's.
      bool harmless = true;
      for (int j = 0; j < n && harmless; ++j)
        if (!dev.contains(j) && moved[j] > base[j]) harmless = false;
      if (harmless) ++neutral_type;
    }
  }
  return {attacker_type, neutral_type};
}

}  // namespace tra
