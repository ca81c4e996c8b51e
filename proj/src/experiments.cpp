#include "tra/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "tra/game.hpp"
#include "tra/instance_io.hpp"

namespace tra {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "tra-game 1.0.0";
constexpr int kInstanceAttempts = 1000;
constexpr int kTableMaxNodes = 16;

std::string fmt(double v, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

}  // namespace

GameInstance generate_instance(const ExperimentConfig& config,
                               std::uint64_t instance_id) {
  Rng rng = Rng::substream(config.seed, instance_id, 0);
  TrafficOptions opts = config.traffic;
  for (int attempt = 0; attempt < kInstanceAttempts; ++attempt) {
    try {
      Topology t = random_topology(config.n, config.edge_prob, rng);
      FlowSet f = generate_traffic(t, config.pattern, opts, rng);
      return GameInstance(std::move(t), std::move(f), config.rank_params,
                          config.cost_params);
    } catch (const std::exception&) {
      // route generation dead end or zero baseline: resample
    }
  }
  throw std::runtime_error("instance generation exhausted for id " +
                           std::to_string(instance_id));
}

namespace {

struct InstanceOutcome {
  InstanceStats stats;
  std::vector<double> sum_attackers;     // per stage, summed over runs
  std::vector<double> sum_dissatisfied;
  std::vector<RunRow> run_rows;
  int runs = 0;
};

InstanceOutcome evaluate_instance(const ExperimentConfig& config,
                                  int instance_id) {
  InstanceOutcome out;
  out.stats.instance_id = instance_id;

  const GameInstance instance =
      generate_instance(config, static_cast<std::uint64_t>(instance_id));
  std::optional<CostTable> table;
  if (instance.node_count() <= kTableMaxNodes) table.emplace(instance);
  const CostTable* tbl = table ? &*table : nullptr;

  // Exhaustive profile census per delta.
  const int n = instance.node_count();
  const std::uint64_t profiles = 1ULL << n;
  std::vector<int> violations;
  if (tbl) {
    violations.resize(profiles);
    for (std::uint64_t p = 0; p < profiles; ++p)
      violations[p] = delta_violations(*tbl, p);
  }
  for (double d : config.deltas) {
    DeltaStats ds;
    ds.delta = d;
    const int threshold = delta_threshold(n, d);
    if (tbl) {
      for (std::uint64_t p = 0; p < profiles; ++p)
        if (violations[p] <= threshold) ++ds.ne_count;
    } else {
      for (std::uint64_t p = 0; p < profiles; ++p)
        if (delta_violations(instance, AttackerSet(n, p)) <= threshold)
          ++ds.ne_count;
    }
    ds.ne_proportion_pct = 100.0 * ds.ne_count / static_cast<double>(profiles);
    out.stats.per_delta.push_back(ds);
  }
  // Strict NE among the weak ones (delta = 0).
  {
    for (std::uint64_t p = 0; p < profiles; ++p) {
      const bool weak = tbl ? violations[p] == 0
                            : delta_violations(instance, AttackerSet(n, p)) == 0;
      if (weak && is_nash(instance, AttackerSet(n, p), NeMode::Strict))
        ++out.stats.strict_ne_count;
    }
  }

  // Monte Carlo evolutions.
  std::vector<RunTrace> traces;
  traces.reserve(static_cast<std::size_t>(config.runs_per_instance));
  out.sum_attackers.assign(static_cast<std::size_t>(config.multistage.max_stages) + 1, 0.0);
  out.sum_dissatisfied.assign(out.sum_attackers.size(), 0.0);
  int converged = 0;
  int nontrivial = 0;
  double anom_attacker = 0.0;
  double anom_neutral = 0.0;
  for (int r = 0; r < config.runs_per_instance; ++r) {
    Rng rng = Rng::substream(config.seed, static_cast<std::uint64_t>(instance_id),
                             static_cast<std::uint64_t>(r) + 1);
    RunTrace trace = run(instance, config.multistage, rng, tbl);
    if (trace.converged()) {
      ++converged;
      const AttackerSet& a = *trace.quasi_equilibrium;
      if (a.count() != 0 && a.count() != n) ++nontrivial;
    }
    // Mean evolution series; a run that stopped early stays frozen in its
    // absorbing state, so extend it with its final values.
    for (std::size_t k = 0; k < out.sum_attackers.size(); ++k) {
      const StageRecord& rec =
          k < trace.stages.size() ? trace.stages[k] : trace.stages.back();
      out.sum_attackers[k] += rec.attacker_count;
      out.sum_dissatisfied[k] += k < trace.stages.size() ? rec.dissatisfied : 0;
    }
    const auto [at, nt] = anomalous_nodes(instance, trace.asymptotic_set(), tbl);
    anom_attacker += at;
    anom_neutral += nt;
    out.run_rows.push_back({instance_id, r, trace.initial_set.str(),
                            trace.asymptotic_set().str(), trace.converged()});
    traces.push_back(std::move(trace));
  }
  out.runs = config.runs_per_instance;
  out.stats.convergence_pct = 100.0 * converged / std::max(1, config.runs_per_instance);
  out.stats.nontrivial_convergence_pct =
      100.0 * nontrivial / std::max(1, config.runs_per_instance);

  for (auto& ds : out.stats.per_delta) {
    ds.ne_hits_pct = ne_hits(instance, traces, ds.delta,
                             AsymptoteRule::QuasiEquilibriumOrFinal, tbl);
    ds.ne_hits_final_pct =
        ne_hits(instance, traces, ds.delta, AsymptoteRule::FinalStage, tbl);
  }
  const auto [init_pct, asym_pct] = effectiveness(instance, traces, tbl);
  out.stats.initial_beneficiary_pct = init_pct;
  out.stats.asymptotic_beneficiary_pct = asym_pct;
  const double run_scale =
      100.0 / (std::max(1, config.runs_per_instance) * static_cast<double>(n));
  out.stats.anomalous_attacker_pct = anom_attacker * run_scale;
  out.stats.anomalous_neutral_pct = anom_neutral * run_scale;
  return out;
}

void write_outputs(const CampaignReport& report, const std::string& dir);

}  // namespace

int CampaignReport::instances_above_ne_diag(double delta) const {
  int count = 0;
  for (const auto& row : rows)
    for (const auto& ds : row.per_delta)
      if (ds.delta == delta && ds.ne_hits_pct > ds.ne_proportion_pct) {
        ++count;
        break;
      }
  return count;
}

int CampaignReport::instances_effective() const {
  int count = 0;
  for (const auto& row : rows)
    if (row.asymptotic_beneficiary_pct > row.initial_beneficiary_pct) ++count;
  return count;
}

CampaignReport run_campaign(const ExperimentConfig& config) {
  CampaignReport report;
  report.config = config;
  report.rows.resize(static_cast<std::size_t>(config.instance_count));

  std::vector<InstanceOutcome> outcomes(
      static_cast<std::size_t>(config.instance_count));
  std::atomic<int> next{0};
  const int workers =
      std::max(1, std::min(config.threads, config.instance_count));
  auto work = [&] {
    for (;;) {
      const int id = next.fetch_add(1);
      if (id >= config.instance_count) return;
      outcomes[static_cast<std::size_t>(id)] = evaluate_instance(config, id);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  const std::size_t stages =
      static_cast<std::size_t>(config.multistage.max_stages) + 1;
  report.mean_attackers.assign(stages, 0.0);
  report.mean_dissatisfied.assign(stages, 0.0);
  long long total_runs = 0;
  for (int id = 0; id < config.instance_count; ++id) {
    auto& oc = outcomes[static_cast<std::size_t>(id)];
    report.rows[static_cast<std::size_t>(id)] = oc.stats;
    report.run_rows.insert(report.run_rows.end(), oc.run_rows.begin(),
                           oc.run_rows.end());
    total_runs += oc.runs;
    for (std::size_t k = 0; k < stages; ++k) {
      report.mean_attackers[k] += oc.sum_attackers[k];
      report.mean_dissatisfied[k] += oc.sum_dissatisfied[k];
    }
  }
  if (total_runs > 0)
    for (std::size_t k = 0; k < stages; ++k) {
      report.mean_attackers[k] /= static_cast<double>(total_runs);
      report.mean_dissatisfied[k] /= static_cast<double>(total_runs);
    }

  std::vector<double> props;
  double conv = 0.0;
  double nontrivial = 0.0;
  double anom_a = 0.0;
  double anom_n = 0.0;
  for (const auto& row : report.rows) {
    if (!row.per_delta.empty()) {
      props.push_back(row.per_delta.front().ne_proportion_pct);
      report.weak_ne_total += row.per_delta.front().ne_count;
    }
    report.strict_ne_total += row.strict_ne_count;
    conv += row.convergence_pct;
    nontrivial += row.nontrivial_convergence_pct;
    anom_a += row.anomalous_attacker_pct;
    anom_n += row.anomalous_neutral_pct;
  }
  const double inv = 1.0 / std::max<std::size_t>(1, report.rows.size());
  report.mean_convergence_pct = conv * inv;
  report.mean_nontrivial_convergence_pct = nontrivial * inv;
  report.mean_anomalous_attacker_pct = anom_a * inv;
  report.mean_anomalous_neutral_pct = anom_n * inv;
  if (!props.empty()) {
    std::sort(props.begin(), props.end());
    report.median_ne_proportion_pct = props[props.size() / 2];
  }

  if (!config.out_dir.empty()) write_outputs(report, config.out_dir);
  return report;
}

namespace {

json config_to_json(const ExperimentConfig& c) {
  std::string pattern =
      c.pattern == TrafficPattern::FlowSparse ? "flow_sparse" : "flow_dense";
  std::string initial;
  switch (c.multistage.initial_set) {
    case InitialSet::Empty: initial = "empty"; break;
    case InitialSet::Full: initial = "full"; break;
    case InitialSet::Random: initial = "random"; break;
    case InitialSet::Explicit: initial = "explicit"; break;
  }
  return json{
      {"instances", c.instance_count},
      {"n", c.n},
      {"pattern", pattern},
      {"route_length", {c.traffic.min_length, c.traffic.max_length}},
      {"fixture_layout", c.traffic.fixture_layout},
      {"edge_prob", c.edge_prob},
      {"alpha", c.rank_params.alpha},
      {"beta", c.rank_params.beta},
      {"gamma_vo", c.cost_params.gamma_vo},
      {"runs", c.runs_per_instance},
      {"multistage",
       {{"cm", c.multistage.cm},
        {"max_stages", c.multistage.max_stages},
        {"stability_window", c.multistage.stability_window},
        {"initial", initial},
        {"previous_stage_attribution",
         c.multistage.previous_stage_attribution}}},
      {"deltas", c.deltas},
      {"seed", c.seed},
      {"threads", c.threads},
  };
}

void write_outputs(const CampaignReport& report, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const auto path = [&](const char* name) { return (fs::path(dir) / name).string(); };

  {
    std::ofstream out(path("instance_summary.csv"));
    out << "instance";
    for (const auto& ds : report.rows.front().per_delta) {
      const std::string tag = fmt(ds.delta, 2);
      out << ",ne_count_d" << tag << ",ne_proportion_pct_d" << tag
          << ",ne_hits_pct_d" << tag << ",ne_hits_final_pct_d" << tag;
    }
    out << ",strict_ne_count,convergence_pct,nontrivial_convergence_pct,"
           "initial_beneficiary_pct,asymptotic_beneficiary_pct,"
           "anomalous_attacker_pct,anomalous_neutral_pct\n";
    for (const auto& row : report.rows) {
      out << row.instance_id;
      for (const auto& ds : row.per_delta)
        out << ',' << ds.ne_count << ',' << fmt(ds.ne_proportion_pct) << ','
            << fmt(ds.ne_hits_pct) << ',' << fmt(ds.ne_hits_final_pct);
      out << ',' << row.strict_ne_count << ',' << fmt(row.convergence_pct)
          << ',' << fmt(row.nontrivial_convergence_pct) << ','
          << fmt(row.initial_beneficiary_pct) << ','
          << fmt(row.asymptotic_beneficiary_pct) << ','
          << fmt(row.anomalous_attacker_pct) << ','
          << fmt(row.anomalous_neutral_pct) << '\n';
    }
  }
  {
    std::ofstream out(path("evolution.csv"));
    out << "stage,mean_attackers,mean_dissatisfied\n";
    for (std::size_t k = 0; k < report.mean_attackers.size(); ++k)
      out << k << ',' << fmt(report.mean_attackers[k]) << ','
          << fmt(report.mean_dissatisfied[k]) << '\n';
  }
  for (std::size_t di = 0; di < report.config.deltas.size(); ++di) {
    const double d = report.config.deltas[di];
    std::ofstream out(path(("scatter_delta" + fmt(d, 2) + ".csv").c_str()));
    out << "instance,ne_proportion_pct,ne_hits_pct,ne_hits_final_pct\n";
    for (const auto& row : report.rows) {
      const auto& ds = row.per_delta[di];
      out << row.instance_id << ',' << fmt(ds.ne_proportion_pct) << ','
          << fmt(ds.ne_hits_pct) << ',' << fmt(ds.ne_hits_final_pct) << '\n';
    }
  }
  {
    std::ofstream out(path("runs.csv"));
    out << "instance,run,a0,a_inf,converged\n";
    for (const auto& row : report.run_rows)
      out << row.instance_id << ',' << row.run_id << ",\"" << row.initial_set
          << "\",\"" << row.asymptotic_set << "\"," << (row.converged ? 1 : 0)
          << '\n';
  }
  {
    std::ofstream out(path("effectiveness.csv"));
    out << "instance,initial_beneficiary_pct,asymptotic_beneficiary_pct\n";
    for (const auto& row : report.rows)
      out << row.instance_id << ',' << fmt(row.initial_beneficiary_pct) << ','
          << fmt(row.asymptotic_beneficiary_pct) << '\n';
  }
  {
    json rows = json::array();
    for (const auto& row : report.rows) {
      json deltas = json::array();
      for (const auto& ds : row.per_delta)
        deltas.push_back({{"delta", ds.delta},
                          {"ne_count", ds.ne_count},
                          {"ne_proportion_pct", ds.ne_proportion_pct},
                          {"ne_hits_pct", ds.ne_hits_pct},
                          {"ne_hits_final_pct", ds.ne_hits_final_pct}});
      rows.push_back({{"instance", row.instance_id},
                      {"per_delta", deltas},
                      {"strict_ne_count", row.strict_ne_count},
                      {"convergence_pct", row.convergence_pct},
                      {"nontrivial_convergence_pct",
                       row.nontrivial_convergence_pct},
                      {"initial_beneficiary_pct", row.initial_beneficiary_pct},
                      {"asymptotic_beneficiary_pct",
                       row.asymptotic_beneficiary_pct},
                      {"anomalous_attacker_pct", row.anomalous_attacker_pct},
                      {"anomalous_neutral_pct", row.anomalous_neutral_pct}});
    }
    const json doc{
        {"provenance", {{"version", kVersion}, {"config", config_to_json(report.config)}}},
        {"aggregate",
         {{"median_ne_proportion_pct", report.median_ne_proportion_pct},
          {"mean_convergence_pct", report.mean_convergence_pct},
          {"mean_nontrivial_convergence_pct",
           report.mean_nontrivial_convergence_pct},
          {"mean_anomalous_attacker_pct", report.mean_anomalous_attacker_pct},
          {"mean_anomalous_neutral_pct", report.mean_anomalous_neutral_pct},
          {"weak_ne_total", report.weak_ne_total},
          {"strict_ne_total", report.strict_ne_total},
          {"instances_effective", report.instances_effective()}}},
        {"instances", rows},
    };
    std::ofstream out(path("report.json"));
    out << doc.dump(2) << '\n';
  }
}

}  // namespace

ExperimentConfig config_from_json_text(const std::string& text) {
  const json j = json::parse(text);
  ExperimentConfig c;
  c.instance_count = j.value("instances", c.instance_count);
  c.n = j.value("n", c.n);
  if (j.contains("pattern")) {
    const std::string p = j.at("pattern").get<std::string>();
    if (p == "flow_sparse")
      c.pattern = TrafficPattern::FlowSparse;
    else if (p == "flow_dense")
      c.pattern = TrafficPattern::FlowDense;
    else
      throw std::invalid_argument("config: unknown pattern " + p);
  }
  if (j.contains("route_length")) {
    c.traffic.min_length = j.at("route_length").at(0).get<int>();
    c.traffic.max_length = j.at("route_length").at(1).get<int>();
  }
  c.traffic.fixture_layout = j.value("fixture_layout", false);
  c.edge_prob = j.value("edge_prob", c.edge_prob);
  c.rank_params.alpha = j.value("alpha", c.rank_params.alpha);
  c.rank_params.beta = j.value("beta", c.rank_params.beta);
  c.cost_params.gamma_vo = j.value("gamma_vo", c.cost_params.gamma_vo);
  c.runs_per_instance = j.value("runs", c.runs_per_instance);
  if (j.contains("multistage")) {
    const auto& m = j.at("multistage");
    c.multistage.cm = m.value("cm", c.multistage.cm);
    c.multistage.max_stages = m.value("max_stages", c.multistage.max_stages);
    c.multistage.stability_window =
        m.value("stability_window", c.multistage.stability_window);
    c.multistage.previous_stage_attribution =
        m.value("previous_stage_attribution", false);
    const std::string initial = m.value("initial", std::string("empty"));
    if (initial == "empty")
      c.multistage.initial_set = InitialSet::Empty;
    else if (initial == "full")
      c.multistage.initial_set = InitialSet::Full;
    else if (initial == "random")
      c.multistage.initial_set = InitialSet::Random;
    else
      throw std::invalid_argument("config: unknown initial set " + initial);
  }
  if (j.contains("deltas")) c.deltas = j.at("deltas").get<std::vector<double>>();
  c.seed = j.value("seed", c.seed);
  c.out_dir = j.value("out_dir", std::string());
  c.threads = j.value("threads", c.threads);
  return c;
}

std::string config_to_json_text(const ExperimentConfig& config) {
  json j = config_to_json(config);
  j["out_dir"] = config.out_dir;
  return j.dump(2) + "\n";
}

}  // namespace tra
