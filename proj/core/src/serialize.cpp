#include "tnprob/serialize.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tnprob {

using nlohmann::json;

namespace {

json tensor_to_json(const DenseTensor& t) {
  json j;
  j["shape"] = t.shape();
  json data = json::array();
  for (std::size_t i = 0; i < t.size(); ++i)
    data.push_back({t[i].real(), t[i].imag()});
  j["data"] = std::move(data);
  return j;
}

DenseTensor tensor_from_json(const json& j) {
  std::vector<std::size_t> shape = j.at("shape").get<std::vector<std::size_t>>();
  std::vector<cplx> data;
  for (const auto& p : j.at("data")) {
    if (!p.is_array() || p.size() != 2)
      throw SerializationError("tensor element must be a [re, im] pair");
    data.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  return DenseTensor(std::move(shape), std::move(data));
}

json network_to_json_obj(const TensorNetwork& net) {
  json j;
  j["nodes"] = net.graph.nodes;
  json edges = json::array();
  for (const auto& e : net.graph.edges)
    edges.push_back({{"id", e.id}, {"nodes", e.nodes}, {"dim", e.dim}});
  j["edges"] = std::move(edges);
  j["visible_order"] = net.graph.visible_order;
  json cores = json::object();
  for (const auto& [n, core] : net.cores) {
    json c = tensor_to_json(core);
    c["modes"] = net.mode_edges.at(n);
    cores[n] = std::move(c);
  }
  j["cores"] = std::move(cores);
  return j;
}

TensorNetwork network_from_json_obj(const json& j) {
  TensorNetwork net;
  net.graph.nodes = j.at("nodes").get<std::vector<std::string>>();
  for (const auto& e : j.at("edges")) {
    Edge edge;
    edge.id = e.at("id").get<std::string>();
    edge.nodes = e.at("nodes").get<std::vector<std::string>>();
    edge.dim = e.at("dim").get<std::size_t>();
    net.graph.edges.push_back(std::move(edge));
  }
  net.graph.visible_order = j.at("visible_order").get<std::vector<std::string>>();
  for (const auto& [n, c] : j.at("cores").items()) {
    net.cores[n] = tensor_from_json(c);
    net.mode_edges[n] = c.at("modes").get<std::vector<std::string>>();
  }
  ValidationReport rep = validate(net);
  if (!rep.ok())
    throw SerializationError("invalid network in file:\n" + rep.to_string());
  return net;
}

}  // namespace

std::string network_to_json(const TensorNetwork& net) {
  return network_to_json_obj(net).dump(2);
}

TensorNetwork network_from_json(const std::string& text) {
  try {
    return network_from_json_obj(json::parse(text));
  } catch (const json::exception& e) {
    throw SerializationError(std::string("malformed network file: ") + e.what());
  }
}

std::string model_family_name(const Model& m) {
  if (std::holds_alternative<Ugm>(m)) return "ugm";
  if (std::holds_alternative<BornMachine>(m)) return "bm";
  if (std::holds_alternative<DecoheredBM>(m)) return "dbm";
  return "lps";
}

std::string model_to_json(const Model& m) {
  json j;
  j["family"] = model_family_name(m);
  std::visit(
      [&](const auto& mm) {
        using T = std::decay_t<decltype(mm)>;
        if constexpr (std::is_same_v<T, DecoheredBM>) {
          j["network"] = network_to_json_obj(mm.bm.net);
          j["decohered"] = std::vector<std::string>(mm.decohered.begin(),
                                                    mm.decohered.end());
        } else if constexpr (std::is_same_v<T, Lps>) {
          j["network"] = network_to_json_obj(mm.net);
          j["purification"] = std::vector<std::string>(mm.purification.begin(),
                                                       mm.purification.end());
        } else {
          j["network"] = network_to_json_obj(mm.net);
        }
      },
      m);
  return j.dump(2);
}

Model model_from_json(const std::string& text) {
  json j;
  std::string family;
  TensorNetwork net;
  try {
    j = json::parse(text);
    family = j.at("family").get<std::string>();
    if (family != "ugm" && family != "bm" && family != "dbm" && family != "lps")
      throw SerializationError("unknown model family: " + family);
    net = network_from_json_obj(j.at("network"));
  } catch (const json::exception& e) {
    throw SerializationError(std::string("malformed model file: ") + e.what());
  }
  Model m;
  if (family == "ugm") {
    m = Ugm{std::move(net)};
  } else if (family == "bm") {
    m = BornMachine{std::move(net)};
  } else if (family == "dbm") {
    std::set<std::string> deco;
    if (j.contains("decohered"))
      for (const auto& e : j.at("decohered")) deco.insert(e.get<std::string>());
    m = DecoheredBM{BornMachine{std::move(net)}, std::move(deco)};
  } else if (family == "lps") {
    std::set<std::string> pur;
    if (j.contains("purification"))
      for (const auto& e : j.at("purification")) pur.insert(e.get<std::string>());
    m = Lps{std::move(net), std::move(pur)};
  } else {
    throw SerializationError("unknown model family: " + family);
  }
  ValidationReport rep = validate_model(m);
  if (!rep.ok())
    throw SerializationError("invalid model in file:\n" + rep.to_string());
  return m;
}

void save_model(const Model& m, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw SerializationError("cannot open for writing: " + path);
  f << model_to_json(m) << "\n";
}

Model load_model(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw SerializationError("cannot open: " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return model_from_json(os.str());
}

}  // namespace tnprob
