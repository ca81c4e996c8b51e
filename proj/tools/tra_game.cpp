// Command-line front end: instance generation, attack/cost tables, NE scans,
// multistage evolutions, batch campaigns, and the bundled fixture gate.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "tra/experiments.hpp"
#include "tra/fixtures.hpp"
#include "tra/game.hpp"
#include "tra/instance_io.hpp"
#include "tra/multistage.hpp"

using nlohmann::json;
using namespace tra;

namespace {

std::string fmt(double v, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
}

std::string route_str(const Route& r) {
  std::string s;
  for (std::size_t k = 0; k < r.nodes().size(); ++k) {
    if (k) s += ' ';
    s += std::to_string(r.nodes()[k] + 1);
  }
  return s;
}

std::string attacks_csv(const GameInstance& instance, const AttackerSet& a) {
  std::string out = "flow,route,ac,tra\n";
  for (const auto& f : instance.flows().flows()) {
    out += std::to_string(f.id);
    out += ',' + route_str(f.route);
    out += ',';
    out += to_string(f.ac);
    out += ',' + render_tra_events(tra_events(f, a));
    out += '\n';
  }
  return out;
}

json attacks_json(const GameInstance& instance, const AttackerSet& a) {
  json rows = json::array();
  for (const auto& f : instance.flows().flows())
    rows.push_back({{"flow", f.id},
                    {"route", route_str(f.route)},
                    {"ac", to_string(f.ac)},
                    {"tra", render_tra_events(tra_events(f, a))}});
  return rows;
}

std::string costs_csv(const GameInstance& instance, const AttackerSet& a) {
  const auto analysis = analyze_profile(instance, a);
  std::string out = "node,nodalcost,cost,cost_change_pct,state\n";
  for (int i = 0; i < instance.node_count(); ++i) {
    const Rational& c = analysis.costs[static_cast<std::size_t>(i)];
    out += std::to_string(i + 1);
    out += ',' + fmt(instance.nodalcost(a, i).to_double());
    out += ',' + fmt(c.to_double());
    out += ',' + std::to_string(c.percent_change());
    out += ',';
    out += to_string(analysis.classification[static_cast<std::size_t>(i)]);
    out += '\n';
  }
  return out;
}

json costs_json(const GameInstance& instance, const AttackerSet& a) {
  const auto analysis = analyze_profile(instance, a);
  json rows = json::array();
  for (int i = 0; i < instance.node_count(); ++i) {
    const Rational& c = analysis.costs[static_cast<std::size_t>(i)];
    rows.push_back(
        {{"node", i + 1},
         {"nodalcost", instance.nodalcost(a, i).to_double()},
         {"cost", c.to_double()},
         {"cost_exact", c.str()},
         {"cost_change_pct", c.percent_change()},
         {"state",
          to_string(analysis.classification[static_cast<std::size_t>(i)])}});
  }
  return json{{"attackers", a.str()},
              {"ne_status", to_string(analysis.ne_status)},
              {"violated_count", analysis.violated_count},
              {"nodes", rows}};
}

std::vector<double> parse_deltas(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) out.push_back(std::stod(tok));
  if (out.empty()) throw std::runtime_error("no deltas given");
  return out;
}

InitialSet parse_initial(const std::string& text) {
  if (text == "empty") return InitialSet::Empty;
  if (text == "full") return InitialSet::Full;
  if (text == "random") return InitialSet::Random;
  throw std::runtime_error("unknown initial set policy: " + text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Traffic remapping attack game simulator"};
  app.require_subcommand(1);

  std::string out_path;
  std::string format = "csv";
  std::uint64_t seed = 1;
  app.add_option("--out", out_path, "Output file or directory")->capture_default_str();
  app.add_option("--format", format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--seed", seed, "Random stream seed")->capture_default_str();

  // let --seed/--out/--format appear after the subcommand name too
  app.fallthrough();

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a random instance bundle");
  int gen_n = 10;
  std::string gen_pattern = "sparse";
  double gen_edge_prob = 0.5;
  int gen_min_len = 2, gen_max_len = 5;
  bool gen_fixture_layout = false;
  int gen_alpha = 40, gen_beta = 10, gen_gamma = 2;
  gen->add_option("--n", gen_n, "Node count")->capture_default_str();
  gen->add_option("--pattern", gen_pattern, "sparse or dense")
      ->check(CLI::IsMember({"sparse", "dense"}))
      ->capture_default_str();
  gen->add_option("--edge-prob", gen_edge_prob)->capture_default_str();
  gen->add_option("--min-len", gen_min_len)->capture_default_str();
  gen->add_option("--max-len", gen_max_len)->capture_default_str();
  gen->add_flag("--fixture-layout", gen_fixture_layout,
                "Assign VO to alternating nodes instead of a random half");
  gen->add_option("--alpha", gen_alpha)->capture_default_str();
  gen->add_option("--beta", gen_beta)->capture_default_str();
  gen->add_option("--gamma-vo", gen_gamma)->capture_default_str();

  // attacks / costs
  auto* attacks = app.add_subcommand("attacks", "Per-flow remapping events");
  auto* costs = app.add_subcommand("costs", "Per-node cost table");
  std::string instance_path;
  std::string attackers_text;
  for (auto* cmd : {attacks, costs}) {
    cmd->add_option("--instance", instance_path, "Instance bundle (json)")
        ->required();
    cmd->add_option("--attackers", attackers_text,
                    "Comma-separated 1-based node labels, e.g. 1,3,8,9");
  }

  // ne-scan
  auto* ne_scan = app.add_subcommand("ne-scan", "Exhaustive equilibrium scan");
  std::string ne_deltas = "0,0.1,0.2";
  int ne_bound = 24;
  ne_scan->add_option("--instance", instance_path, "Instance bundle (json)")
      ->required();
  ne_scan->add_option("--delta", ne_deltas, "Comma-separated delta values")
      ->capture_default_str();
  ne_scan->add_option("--exhaustive-bound", ne_bound)->capture_default_str();

  // evolve
  auto* evolve = app.add_subcommand("evolve", "Multistage Monte Carlo runs");
  int ev_cm = 10, ev_stages = 200, ev_runs = 100, ev_window = 50;
  std::string ev_a0 = "empty";
  bool ev_prev_attrib = false;
  evolve->add_option("--instance", instance_path, "Instance bundle (json)")
      ->required();
  evolve->add_option("--cm", ev_cm, "Cost memory")->capture_default_str();
  evolve->add_option("--stages", ev_stages)->capture_default_str();
  evolve->add_option("--runs", ev_runs)->capture_default_str();
  evolve->add_option("--window", ev_window, "Stability window")
      ->capture_default_str();
  evolve->add_option("--a0", ev_a0, "Initial set: empty, full or random")
      ->check(CLI::IsMember({"empty", "full", "random"}))
      ->capture_default_str();
  evolve->add_flag("--previous-stage-attribution", ev_prev_attrib,
                   "Credit cost changes to the previous stage's behavior");

  // campaign
  auto* campaign = app.add_subcommand("campaign", "Batch experiment harness");
  std::string config_path;
  int campaign_threads = 0;
  campaign->add_option("--config", config_path, "Campaign config (json)")
      ->required();
  campaign->add_option("--threads", campaign_threads,
                       "Worker threads (0 = from config)");

  // fixtures
  auto* fixtures = app.add_subcommand("fixtures", "Bundled reference fixtures");
  bool fx_check = false;
  std::string fx_write;
  fixtures->add_flag("--check", fx_check,
                     "Recompute fixture outputs and compare");
  fixtures->add_option("--write", fx_write,
                       "Write fixture instance bundles to a directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      ExperimentConfig cfg;
      cfg.n = gen_n;
      cfg.pattern = gen_pattern == "sparse" ? TrafficPattern::FlowSparse
                                            : TrafficPattern::FlowDense;
      cfg.edge_prob = gen_edge_prob;
      cfg.traffic.min_length = gen_min_len;
      cfg.traffic.max_length = gen_max_len;
      cfg.traffic.fixture_layout = gen_fixture_layout;
      cfg.rank_params = {gen_alpha, gen_beta};
      cfg.cost_params = {gen_gamma};
      cfg.seed = seed;
      const GameInstance instance = generate_instance(cfg, 0);
      emit(instance_to_json_text(instance), out_path);
    } else if (*attacks || *costs) {
      const GameInstance instance = load_instance_file(instance_path);
      const AttackerSet a =
          AttackerSet::parse(attackers_text, instance.node_count());
      if (*attacks)
        emit(format == "json" ? attacks_json(instance, a).dump(2) + "\n"
                              : attacks_csv(instance, a),
             out_path);
      else
        emit(format == "json" ? costs_json(instance, a).dump(2) + "\n"
                              : costs_csv(instance, a),
             out_path);
    } else if (*ne_scan) {
      const GameInstance instance = load_instance_file(instance_path);
      const auto deltas = parse_deltas(ne_deltas);
      const std::uint64_t profiles = 1ULL << instance.node_count();
      if (format == "json") {
        json out;
        out["profiles"] = profiles;
        out["empty_profile"] = to_string(
            analyze_profile(instance, AttackerSet::empty(instance.node_count()))
                .ne_status);
        out["full_profile"] = to_string(
            analyze_profile(instance, AttackerSet::full(instance.node_count()))
                .ne_status);
        json per_delta = json::array();
        for (double d : deltas) {
          const auto found = enumerate_ne(instance, d, ne_bound);
          json list = json::array();
          for (const auto& a : found) list.push_back(a.str());
          per_delta.push_back(
              {{"delta", d},
               {"count", found.size()},
               {"proportion_pct",
                100.0 * static_cast<double>(found.size()) / profiles},
               {"profiles", list}});
        }
        out["per_delta"] = per_delta;
        emit(out.dump(2) + "\n", out_path);
      } else {
        std::string out = "delta,count,proportion_pct,profile\n";
        for (double d : deltas) {
          const auto found = enumerate_ne(instance, d, ne_bound);
          const std::string head =
              fmt(d, 2) + ',' + std::to_string(found.size()) + ',' +
              fmt(100.0 * static_cast<double>(found.size()) / profiles);
          if (found.empty()) out += head + ",\n";
          for (const auto& a : found)
            out += head + ",\"" + a.str() + "\"\n";
        }
        emit(out, out_path);
      }
    } else if (*evolve) {
      const GameInstance instance = load_instance_file(instance_path);
      MultistageConfig mcfg;
      mcfg.cm = ev_cm;
      mcfg.max_stages = ev_stages;
      mcfg.stability_window = ev_window;
      mcfg.initial_set = parse_initial(ev_a0);
      mcfg.previous_stage_attribution = ev_prev_attrib;
      std::optional<CostTable> table;
      if (instance.node_count() <= 16) table.emplace(instance);
      const CostTable* tbl = table ? &*table : nullptr;

      std::vector<RunTrace> traces;
      for (int r = 0; r < ev_runs; ++r) {
        Rng rng = Rng::substream(seed, 0, static_cast<std::uint64_t>(r) + 1);
        traces.push_back(run(instance, mcfg, rng, tbl));
      }

      namespace fs = std::filesystem;
      const fs::path dir = out_path.empty() ? fs::path(".") : fs::path(out_path);
      fs::create_directories(dir);
      {
        std::ofstream out(dir / "stages.csv");
        out << "stage,mean_attackers,mean_dissatisfied\n";
        for (int k = 0; k <= ev_stages; ++k) {
          double at = 0.0, dis = 0.0;
          for (const auto& t : traces) {
            const auto& rec = static_cast<std::size_t>(k) < t.stages.size()
                                  ? t.stages[static_cast<std::size_t>(k)]
                                  : t.stages.back();
            at += rec.attacker_count;
            dis += static_cast<std::size_t>(k) < t.stages.size()
                       ? rec.dissatisfied
                       : 0;
          }
          out << k << ',' << fmt(at / static_cast<double>(traces.size())) << ','
              << fmt(dis / static_cast<double>(traces.size())) << '\n';
        }
      }
      {
        std::ofstream out(dir / "runs.csv");
        out << "run,a0,a_inf,converged,ne_delta0,ne_delta0.1,ne_delta0.2,"
               "initial_beneficiary_pct,asymptotic_beneficiary_pct\n";
        for (std::size_t r = 0; r < traces.size(); ++r) {
          const auto& t = traces[r];
          const std::span<const RunTrace> one(&t, 1);
          const auto [b0, b1] = effectiveness(instance, one, tbl);
          out << r << ",\"" << t.initial_set.str() << "\",\""
              << t.asymptotic_set().str() << "\","
              << (t.converged() ? 1 : 0);
          for (double d : {0.0, 0.1, 0.2}) {
            const int viol = tbl ? delta_violations(*tbl, t.asymptotic_set().bits())
                                 : delta_violations(instance, t.asymptotic_set());
            out << ','
                << (viol <= delta_threshold(instance.node_count(), d) ? 1 : 0);
          }
          out << ',' << fmt(b0) << ',' << fmt(b1) << '\n';
        }
      }
      std::cout << "wrote " << (dir / "stages.csv").string() << " and "
                << (dir / "runs.csv").string() << "\n";
    } else if (*campaign) {
      std::ifstream in(config_path);
      if (!in) throw std::runtime_error("cannot open config: " + config_path);
      std::ostringstream buf;
      buf << in.rdbuf();
      ExperimentConfig cfg = config_from_json_text(buf.str());
      if (!out_path.empty()) cfg.out_dir = out_path;
      if (campaign_threads > 0) cfg.threads = campaign_threads;
      const CampaignReport report = run_campaign(cfg);
      std::cout << "instances: " << report.rows.size()
                << "\nmedian NE proportion (first delta): "
                << fmt(report.median_ne_proportion_pct)
                << "%\nmean nontrivial convergence: "
                << fmt(report.mean_nontrivial_convergence_pct)
                << "%\ninstances effective: " << report.instances_effective()
                << "/" << report.rows.size() << "\n";
      if (!cfg.out_dir.empty())
        std::cout << "outputs written to " << cfg.out_dir << "\n";
    } else if (*fixtures) {
      if (!fx_write.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(fx_write);
        save_instance_file(fixture_flow_sparse(),
                           (fs::path(fx_write) / "flow_sparse_10.json").string());
        save_instance_file(fixture_flow_dense(),
                           (fs::path(fx_write) / "flow_dense_10.json").string());
        std::cout << "fixture bundles written to " << fx_write << "\n";
      }
      if (fx_check || fx_write.empty()) {
        bool all_ok = true;
        const struct {
          FixtureTable table;
          const char* name;
        } checks[] = {
            {FixtureTable::AnnotationsSparse, "annotations (flow-sparse)"},
            {FixtureTable::AnnotationsDense, "annotations (flow-dense)"},
            {FixtureTable::CostTable, "cost-change table"},
        };
        for (const auto& c : checks) {
          const auto result = reproduce_fixture(c.table);
          std::cout << (result.ok ? "[ OK ] " : "[FAIL] ") << c.name << ": "
                    << result.cells_matched << "/" << result.cells_total
                    << " cells match\n";
          for (const auto& m : result.mismatches)
            std::cout << "       " << m << "\n";
          all_ok = all_ok && result.ok;
        }
        return all_ok ? 0 : 1;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
