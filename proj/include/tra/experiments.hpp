#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tra/cost_model.hpp"
#include "tra/multistage.hpp"
#include "tra/net_model.hpp"

namespace tra {

struct ExperimentConfig {
  int instance_count = 100;
  int n = 10;
  TrafficPattern pattern = TrafficPattern::FlowSparse;
  TrafficOptions traffic;
  double edge_prob = 0.5;
  RankParams rank_params;
  CostParams cost_params;
  int runs_per_instance = 100;
  MultistageConfig multistage;
  std::vector<double> deltas = {0.0, 0.1, 0.2};
  std::uint64_t seed = 1;
  std::string out_dir;  // empty = no files written
  int threads = 1;
};

struct DeltaStats {
  double delta = 0.0;
  int ne_count = 0;
  double ne_proportion_pct = 0.0;   // among 2^n profiles
  double ne_hits_pct = 0.0;         // quasi-equilibrium-or-final rule
  double ne_hits_final_pct = 0.0;   // final-stage rule
};

struct InstanceStats {
  int instance_id = 0;
  std::vector<DeltaStats> per_delta;
  int strict_ne_count = 0;
  double convergence_pct = 0.0;            // converged runs
  double nontrivial_convergence_pct = 0.0; // converged with {} != A != N
  double initial_beneficiary_pct = 0.0;
  double asymptotic_beneficiary_pct = 0.0;
  double anomalous_attacker_pct = 0.0;  // mean count as % of |N|
  double anomalous_neutral_pct = 0.0;
};

struct RunRow {
  int instance_id = 0;
  int run_id = 0;
  std::string initial_set;
  std::string asymptotic_set;
  bool converged = false;
};

struct CampaignReport {
  ExperimentConfig config;
  std::vector<InstanceStats> rows;
  // One row per run; together with the deterministic instance generation
  // every aggregate statistic can be recomputed from these.
  std::vector<RunRow> run_rows;
  // Mean per-stage series over all runs; runs that stopped early continue
  // with their frozen final values.
  std::vector<double> mean_attackers;
  std::vector<double> mean_dissatisfied;
  // Aggregates.
  double median_ne_proportion_pct = 0.0;  // at deltas[0]
  double mean_convergence_pct = 0.0;
  double mean_nontrivial_convergence_pct = 0.0;
  int instances_above_ne_diag(double delta) const;  // hits > proportion
  int instances_effective() const;                  // asym > initial
  double mean_anomalous_attacker_pct = 0.0;
  double mean_anomalous_neutral_pct = 0.0;
  int weak_ne_total = 0;
  int strict_ne_total = 0;
};

// Deterministically generate the instance with the given id: rejection-
// sample topology and traffic until a valid cost oracle exists.
GameInstance generate_instance(const ExperimentConfig& config,
                               std::uint64_t instance_id);

// Full campaign: NE sweeps and multistage Monte Carlo for every instance.
// When config.out_dir is set, writes report.json, instance_summary.csv,
// evolution.csv, scatter_delta*.csv and effectiveness.csv there.
CampaignReport run_campaign(const ExperimentConfig& config);

// Config (de)serialization; see README for the schema.
ExperimentConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const ExperimentConfig& config);

}  // namespace tra
