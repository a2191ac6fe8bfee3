#include "glp/proof_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace glp {

using Json = nlohmann::ordered_json;

std::string_view proof_kind_name(ProofKind k) {
  switch (k) {
    case ProofKind::Hilbert: return "hilbert";
    case ProofKind::Cyclic: return "cyclic";
    case ProofKind::Omega: return "omega";
    case ProofKind::Graph: return "graph";
  }
  return "?";
}

namespace {

ProofKind parse_kind(const std::string& s) {
  if (s == "hilbert") return ProofKind::Hilbert;
  if (s == "cyclic") return ProofKind::Cyclic;
  if (s == "omega") return ProofKind::Omega;
  if (s == "graph") return ProofKind::Graph;
  throw IoError("unknown proof kind: " + s);
}

std::string rule_string(Rule r) {
  switch (r) {
    case Rule::Axiom: return "ax";
    case Rule::Assumption: return "asm";
    case Rule::MP: return "mp";
    case Rule::Nec: return "nec";
    case Rule::Omega: return "omega";
    case Rule::Ref: return "asm";  // serialized as an asm leaf with backlink
  }
  throw IoError("unknown rule");
}

Rule parse_rule(const std::string& s, bool has_backlink) {
  if (s == "ax") {
    if (has_backlink) throw IoError("backlink on an axiom leaf");
    return Rule::Axiom;
  }
  if (s == "asm") return has_backlink ? Rule::Ref : Rule::Assumption;
  if (s == "mp") return Rule::MP;
  if (s == "nec") return Rule::Nec;
  if (s == "omega") return Rule::Omega;
  throw IoError("unknown rule: " + s);
}

Json formulas_to_json(const std::vector<Formula>& fs) {
  Json arr = Json::array();
  for (const auto& f : fs) arr.push_back(f.str());
  return arr;
}

std::vector<Formula> formulas_from_json(const Json& arr) {
  std::vector<Formula> out;
  for (const auto& item : arr) out.push_back(parse_formula(item.get<std::string>()));
  return out;
}

}  // namespace

std::string write_proof(const ProofDocument& doc) {
  Json root;
  root["kind"] = std::string(proof_kind_name(doc.kind));
  root["root"] = doc.derivation.root;
  Json nodes = Json::array();
  for (NodeId id = 0; id < doc.derivation.size(); ++id) {
    const ProofNode& n = doc.derivation.at(id);
    Json jn;
    jn["id"] = id;
    jn["formula"] = n.formula.str();
    jn["rule"] = rule_string(n.rule);
    if (n.rule == Rule::Omega) {
      const OmegaSpec& spec = n.omega.value();
      Json om;
      om["phi_prefix"] = formulas_to_json(spec.phi_prefix);
      om["phi_cycle"] = formulas_to_json(spec.phi_cycle);
      Json prefix = Json::array(), cycle = Json::array();
      for (std::size_t i = 0; i < n.children.size(); ++i)
        (i < spec.prem_prefix ? prefix : cycle).push_back(n.children[i]);
      om["prem_prefix"] = prefix;
      om["prem_cycle"] = cycle;
      jn["omega"] = om;
    } else {
      jn["children"] = n.children;
    }
    if (n.backlink) jn["backlink"] = *n.backlink;
    nodes.push_back(jn);
  }
  root["nodes"] = nodes;
  if (!doc.sigma.empty()) {
    Json arr = Json::array();
    for (const auto& f : doc.sigma) arr.push_back(f.str());
    root["sigma"] = arr;
  }
  if (!doc.gamma.empty()) {
    Json arr = Json::array();
    for (const auto& f : doc.gamma) arr.push_back(f.str());
    root["gamma"] = arr;
  }
  return root.dump(2) + "\n";
}

ProofDocument read_proof(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const std::exception& e) {
    throw IoError(std::string("proof file is not valid JSON: ") + e.what());
  }
  try {
    ProofDocument doc;
    doc.kind = parse_kind(root.at("kind").get<std::string>());
    const Json& nodes = root.at("nodes");
    // Ids may be sparse or unordered; remap to dense indices by id order.
    std::map<std::size_t, std::size_t> remap;
    std::vector<std::size_t> given_ids;
    for (const auto& jn : nodes) given_ids.push_back(jn.at("id").get<std::size_t>());
    {
      std::map<std::size_t, std::size_t> sorted;
      for (std::size_t id : given_ids) {
        if (sorted.count(id)) throw IoError("duplicate node id " + std::to_string(id));
        sorted[id] = 0;
      }
      std::size_t next = 0;
      for (auto& [id, slot] : sorted) slot = next++;
      remap = std::move(sorted);
    }
    auto lookup = [&remap](std::size_t id) {
      auto it = remap.find(id);
      if (it == remap.end())
        throw IoError("reference to unknown node id " + std::to_string(id));
      return it->second;
    };
    std::vector<std::optional<ProofNode>> slots(nodes.size());
    for (const auto& jn : nodes) {
      std::size_t id = lookup(jn.at("id").get<std::size_t>());
      bool has_backlink = jn.contains("backlink");
      Rule rule = parse_rule(jn.at("rule").get<std::string>(), has_backlink);
      ProofNode node(parse_formula(jn.at("formula").get<std::string>()), rule);
      if (rule == Rule::Omega) {
        const Json& om = jn.at("omega");
        OmegaSpec spec;
        spec.phi_prefix = formulas_from_json(om.at("phi_prefix"));
        spec.phi_cycle = formulas_from_json(om.at("phi_cycle"));
        for (const auto& c : om.at("prem_prefix"))
          node.children.push_back(lookup(c.get<std::size_t>()));
        spec.prem_prefix = node.children.size();
        for (const auto& c : om.at("prem_cycle"))
          node.children.push_back(lookup(c.get<std::size_t>()));
        node.omega = std::move(spec);
      } else if (jn.contains("children")) {
        for (const auto& c : jn.at("children"))
          node.children.push_back(lookup(c.get<std::size_t>()));
      }
      if (has_backlink)
        node.backlink = lookup(jn.at("backlink").get<std::size_t>());
      slots[id] = std::move(node);
    }
    for (auto& s : slots)
      if (!s) throw IoError("node table has holes");
    for (auto& s : slots) doc.derivation.nodes.push_back(std::move(*s));
    doc.derivation.root = lookup(root.at("root").get<std::size_t>());
    if (root.contains("sigma"))
      for (const auto& f : root.at("sigma"))
        doc.sigma.insert(parse_formula(f.get<std::string>()));
    if (root.contains("gamma"))
      for (const auto& f : root.at("gamma"))
        doc.gamma.insert(parse_formula(f.get<std::string>()));
    return doc;
  } catch (const Json::exception& e) {
    throw IoError(std::string("malformed proof file: ") + e.what());
  }
}

namespace {
std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);
  out << text;
}
}  // namespace

ProofDocument load_proof_file(const std::string& path) {
  return read_proof(slurp(path));
}

void save_proof_file(const std::string& path, const ProofDocument& doc) {
  spit(path, write_proof(doc));
}

std::string write_algebra(const FiniteGLPAlgebra& a) {
  Json root;
  root["atoms"] = a.atoms;
  Json boxes = Json::array();
  for (const auto& table : a.boxes) {
    Json jt;
    for (std::size_t x = 0; x < table.size(); ++x)
      jt[std::to_string(x)] = table[x];
    boxes.push_back(jt);
  }
  root["boxes"] = boxes;
  return root.dump(2) + "\n";
}

FiniteGLPAlgebra read_algebra(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const std::exception& e) {
    throw IoError(std::string("algebra file is not valid JSON: ") + e.what());
  }
  try {
    std::vector<std::string> atoms =
        root.at("atoms").get<std::vector<std::string>>();
    if (atoms.size() > kDefaultMaxAtoms)
      throw IoError("algebra file exceeds the carrier bound of " +
                    std::to_string(kDefaultMaxAtoms) + " atoms");
    const std::size_t size = std::size_t{1} << atoms.size();
    std::vector<BoxTable> boxes;
    for (const auto& jt : root.at("boxes")) {
      BoxTable table(size, 0);
      for (auto it = jt.begin(); it != jt.end(); ++it) {
        std::size_t x = 0;
        try {
          std::size_t consumed = 0;
          x = std::stoull(it.key(), &consumed);
          if (consumed != it.key().size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
          throw IoError("element key is not a number: " + it.key());
        }
        if (x >= size) throw IoError("element key out of range: " + it.key());
        table[x] = it.value().get<Elem>();
        if (table[x] >= size)
          throw IoError("element image out of range at key " + it.key());
      }
      boxes.push_back(std::move(table));
    }
    return FiniteGLPAlgebra(std::move(atoms), std::move(boxes));
  } catch (const Json::exception& e) {
    throw IoError(std::string("malformed algebra file: ") + e.what());
  } catch (const AlgebraError& e) {
    throw IoError(std::string("malformed algebra file: ") + e.what());
  }
}

FiniteGLPAlgebra load_algebra_file(const std::string& path) {
  return read_algebra(slurp(path));
}

std::string write_model(const ModelDocument& m) {
  Json root;
  root["points"] = m.point_names;
  Json topologies = Json::array();
  for (const auto& t : m.model.space.topologies) topologies.push_back(t.opens);
  root["topologies"] = topologies;
  Json valuation;
  for (const auto& [var, mask] : m.model.valuation) valuation[var] = mask;
  root["valuation"] = valuation;
  return root.dump(2) + "\n";
}

ModelDocument read_model(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const std::exception& e) {
    throw IoError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    ModelDocument doc;
    doc.point_names = root.at("points").get<std::vector<std::string>>();
    if (doc.point_names.size() > 20)
      throw IoError("model file exceeds the carrier bound of 20 points");
    doc.model.space.points = doc.point_names.size();
    for (const auto& jt : root.at("topologies")) {
      FiniteTopology t = FiniteTopology::from_family(
          doc.point_names.size(), jt.get<std::vector<Mask>>());
      doc.model.space.topologies.push_back(std::move(t));
    }
    if (root.contains("valuation"))
      for (auto it = root.at("valuation").begin();
           it != root.at("valuation").end(); ++it)
        doc.model.valuation[it.key()] = it.value().get<Mask>();
    return doc;
  } catch (const Json::exception& e) {
    throw IoError(std::string("malformed model file: ") + e.what());
  } catch (const TopologyError& e) {
    throw IoError(std::string("malformed model file: ") + e.what());
  }
}

ModelDocument load_model_file(const std::string& path) {
  return read_model(slurp(path));
}

void save_model_file(const std::string& path, const ModelDocument& m) {
  spit(path, write_model(m));
}

}  // namespace glp
