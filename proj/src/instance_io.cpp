#include "tra/instance_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace tra {

using nlohmann::json;

namespace {

json topology_to_json(const Topology& t) {
  json rows = json::array();
  std::istringstream in(render_topology(t));
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) rows.push_back(line);
  return json{{"n", t.size()}, {"matrix", rows}};
}

Topology topology_from_json(const json& j) {
  std::string text;
  for (const auto& row : j.at("matrix"))
    text += row.get<std::string>() + "\n";
  Topology t = parse_topology(text);
  if (j.contains("n") && j.at("n").get<int>() != t.size())
    throw std::invalid_argument("instance json: node count mismatch");
  return t;
}

}  // namespace

std::string instance_to_json_text(const GameInstance& instance) {
  json flows = json::array();
  for (const auto& f : instance.flows().flows()) {
    json route = json::array();
    for (NodeId v : f.route.nodes()) route.push_back(v + 1);
    flows.push_back(
        {{"id", f.id}, {"route", route}, {"ac", to_string(f.ac)}});
  }
  const json doc{
      {"topology", topology_to_json(instance.topology())},
      {"flows", flows},
      {"params",
       {{"alpha", instance.rank_params().alpha},
        {"beta", instance.rank_params().beta},
        {"gamma_vo", instance.cost_params().gamma_vo}}},
  };
  return doc.dump(2) + "\n";
}

GameInstance instance_from_json_text(const std::string& text) {
  const json doc = json::parse(text);
  Topology t = topology_from_json(doc.at("topology"));
  std::vector<E2eFlow> flows;
  for (const auto& jf : doc.at("flows")) {
    std::vector<NodeId> nodes;
    for (const auto& v : jf.at("route")) nodes.push_back(v.get<int>() - 1);
    flows.push_back({jf.at("id").get<int>(), Route(std::move(nodes), t),
                     ac_from_string(jf.at("ac").get<std::string>())});
  }
  RankParams rp;
  CostParams cp;
  if (doc.contains("params")) {
    const auto& p = doc.at("params");
    rp.alpha = p.value("alpha", rp.alpha);
    rp.beta = p.value("beta", rp.beta);
    cp.gamma_vo = p.value("gamma_vo", cp.gamma_vo);
  }
  return GameInstance(std::move(t), FlowSet(std::move(flows)), rp, cp);
}

GameInstance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return instance_from_json_text(buf.str());
}

void save_instance_file(const GameInstance& instance, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file: " + path);
  out << instance_to_json_text(instance);
}

}  // namespace tra
