// Command-line front end: check, classify and translate proof objects,
// evaluate models, run consequence checks and search for countermodels.
//
// Exit codes: 0 = valid / true / no counterexample, 1 = invalid / false /
// counterexample found, 2 = usage or format error.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "glp/cyclic.hpp"
#include "glp/hilbert.hpp"
#include "glp/infinitary.hpp"
#include "glp/proof_io.hpp"
#include "glp/topology.hpp"

namespace {

using namespace glp;
using Json = nlohmann::ordered_json;

constexpr int kExitValid = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitUsage = 2;

FormulaSet parse_set(const std::string& text) {
  FormulaSet out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(';', start);
    std::string part = text.substr(
        start, end == std::string::npos ? std::string::npos : end - start);
    std::size_t a = part.find_first_not_of(" \t");
    if (a != std::string::npos) {
      std::size_t b = part.find_last_not_of(" \t");
      out.insert(parse_formula(part.substr(a, b - a + 1)));
    }
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

Json classification_json(const LeafClassification& cls) {
  Json out;
  Json local = Json::array(), boxed = Json::array();
  for (const auto& f : cls.local_formulas()) local.push_back(f.str());
  for (const auto& f : cls.boxed_formulas()) boxed.push_back(f.str());
  out["local"] = local;
  out["boxed"] = boxed;
  return out;
}

Json issues_json(const CheckReport& report) {
  Json arr = Json::array();
  for (const auto& i : report.issues) {
    Json ji;
    ji["code"] = std::string(check_code_name(i.code));
    if (i.node != kNoNode) ji["node"] = i.node;
    if (i.position) ji["position"] = *i.position;
    ji["detail"] = i.detail;
    arr.push_back(ji);
  }
  return arr;
}

void emit(bool json_mode, const Json& payload, const std::string& text) {
  if (json_mode)
    std::cout << payload.dump(2) << "\n";
  else
    std::cout << text;
}

Judgment check_any(const ProofDocument& doc, const FormulaSet& sigma,
                   const FormulaSet& gamma) {
  switch (doc.kind) {
    case ProofKind::Hilbert:
      return check_hilbert(doc.derivation, sigma, gamma);
    case ProofKind::Cyclic:
      return check_cyclic_judgment(doc.derivation, sigma, gamma);
    case ProofKind::Omega:
      return check_omega(doc.derivation, sigma, gamma);
    case ProofKind::Graph:
      throw IoError("graph presentations are checked via the ravel verb");
  }
  throw IoError("unknown proof kind");
}

int cmd_check(const std::string& path, const std::string& sigma_text,
              const std::string& gamma_text, bool use_file_sets,
              bool json_mode) {
  ProofDocument doc = load_proof_file(path);
  FormulaSet sigma = use_file_sets ? doc.sigma : parse_set(sigma_text);
  FormulaSet gamma = use_file_sets ? doc.gamma : parse_set(gamma_text);
  Judgment j = check_any(doc, sigma, gamma);
  Json out;
  out["kind"] = std::string(proof_kind_name(doc.kind));
  out["valid"] = j.valid();
  out["conclusion"] = j.conclusion.str();
  out["classification"] = classification_json(j.classification);
  out["issues"] = issues_json(j.report);
  std::string text = std::string("kind: ") + std::string(proof_kind_name(doc.kind)) +
                     "\nconclusion: " + j.conclusion.str() +
                     "\nlocal: " + j.classification.local_formulas().str() +
                     "\nboxed: " + j.classification.boxed_formulas().str() +
                     "\nresult: " + (j.valid() ? "valid" : "invalid") + "\n" +
                     (j.valid() ? "" : j.report.str() + "\n");
  emit(json_mode, out, text);
  return j.valid() ? kExitValid : kExitInvalid;
}

int cmd_classify(const std::string& path, const std::string& mode,
                 bool json_mode) {
  ProofDocument doc = load_proof_file(path);
  LeafClassification cls;
  if (doc.kind == ProofKind::Cyclic && mode == "inf")
    cls = classify_inf(unravel(doc.derivation));
  else if (doc.kind == ProofKind::Cyclic)
    cls = classify_cyclic(doc.derivation);
  else if (doc.kind == ProofKind::Hilbert)
    cls = check_hilbert(doc.derivation, {}, {}).classification;
  else if (doc.kind == ProofKind::Omega)
    cls = check_omega(doc.derivation, {}, {}).classification;
  else
    throw IoError("classify expects a proof file, not a graph");
  Json out = classification_json(cls);
  emit(json_mode, out,
       "local: " + cls.local_formulas().str() +
           "\nboxed: " + cls.boxed_formulas().str() + "\n");
  return kExitValid;
}

int cmd_to_hilbert(const std::string& in, const std::string& outpath,
                   bool json_mode) {
  ProofDocument doc = load_proof_file(in);
  if (doc.kind != ProofKind::Cyclic)
    throw IoError("to-hilbert expects a cyclic proof file");
  Derivation h = cyclic_to_hilbert(doc.derivation);
  Judgment j = check_hilbert(h, {}, {});  // self-certification
  if (!j.valid()) {
    std::cout << "internal error: translated proof failed to re-check\n"
              << j.report.str() << "\n";
    return kExitInvalid;
  }
  ProofDocument out{ProofKind::Hilbert, h, {}, {}};
  if (!outpath.empty()) save_proof_file(outpath, out);
  Json payload;
  payload["conclusion"] = h.conclusion().str();
  payload["normalized"] = normalize_conclusion(h.conclusion()).str();
  payload["nodes"] = h.size();
  payload["valid"] = true;
  emit(json_mode, payload,
       "conclusion: " + h.conclusion().str() +
           "\nnormalized: " + normalize_conclusion(h.conclusion()).str() +
           "\nnodes: " + std::to_string(h.size()) + "\nresult: valid\n");
  return kExitValid;
}

int cmd_ravel(const std::string& in, const std::string& outpath,
              bool json_mode) {
  ProofDocument doc = load_proof_file(in);
  Derivation cyc = ravel(doc.derivation);
  CheckReport rep = check_cyclic(cyc);  // self-certification
  if (!rep.ok()) {
    std::cout << "internal error: ravelled proof failed to re-check\n";
    return kExitInvalid;
  }
  if (!outpath.empty())
    save_proof_file(outpath, ProofDocument{ProofKind::Cyclic, cyc, {}, {}});
  Json payload;
  payload["nodes"] = cyc.size();
  payload["bisimilar"] = bisimilar(cyc, doc.derivation);
  payload["valid"] = true;
  emit(json_mode, payload,
       "nodes: " + std::to_string(cyc.size()) + "\nbisimilar: " +
           (bisimilar(cyc, doc.derivation) ? "yes" : "no") +
           "\nresult: valid\n");
  return kExitValid;
}

int cmd_to_omega(const std::string& in, const std::string& sigma_text,
                 const std::string& gamma_text, const std::string& outpath,
                 bool json_mode) {
  ProofDocument doc = load_proof_file(in);
  if (doc.kind != ProofKind::Cyclic)
    throw IoError("to-omega expects a cyclic proof file");
  FormulaSet sigma = sigma_text.empty() ? doc.sigma : parse_set(sigma_text);
  FormulaSet gamma = gamma_text.empty() ? doc.gamma : parse_set(gamma_text);
  Derivation om = inf_to_omega(unravel(doc.derivation), sigma, gamma);
  Judgment j = check_omega(om, sigma, gamma);  // self-certification
  if (!j.valid()) {
    std::cout << "internal error: omega translation failed to re-check\n";
    return kExitInvalid;
  }
  if (!outpath.empty())
    save_proof_file(outpath, ProofDocument{ProofKind::Omega, om, sigma, gamma});
  Json payload;
  payload["conclusion"] = om.conclusion().str();
  payload["nodes"] = om.size();
  payload["valid"] = true;
  emit(json_mode, payload,
       "conclusion: " + om.conclusion().str() +
           "\nnodes: " + std::to_string(om.size()) + "\nresult: valid\n");
  return kExitValid;
}

int cmd_to_inf(const std::string& in, const std::string& outpath,
               bool json_mode) {
  ProofDocument doc = load_proof_file(in);
  if (doc.kind != ProofKind::Omega)
    throw IoError("to-inf expects an omega proof file");
  RegularInfDerivation r = omega_to_inf(doc.derivation);
  if (!outpath.empty())
    save_proof_file(outpath, ProofDocument{ProofKind::Cyclic, r.presentation,
                                           doc.sigma, doc.gamma});
  LeafClassification cls = classify_inf(r);
  Json payload;
  payload["nodes"] = r.presentation.size();
  payload["classification"] = classification_json(cls);
  payload["valid"] = true;
  emit(json_mode, payload,
       "nodes: " + std::to_string(r.presentation.size()) +
           "\nlocal: " + cls.local_formulas().str() +
           "\nboxed: " + cls.boxed_formulas().str() + "\nresult: valid\n");
  return kExitValid;
}

std::string mask_str(Mask m, std::size_t points,
                     const std::vector<std::string>& names) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < points; ++i)
    if (m & (Mask{1} << i)) {
      if (!first) out += ", ";
      first = false;
      out += i < names.size() ? names[i] : std::to_string(i);
    }
  return out + "}";
}

int cmd_eval(const std::string& model_path, const std::string& phi_text,
             bool json_mode) {
  ModelDocument doc = load_model_file(model_path);
  Formula phi = parse_formula(phi_text);
  Mask truth = eval_model(doc.model, phi);
  Json payload;
  payload["formula"] = phi.str();
  payload["truth_set"] = truth;
  payload["everywhere"] = truth == doc.model.space.full();
  emit(json_mode, payload,
       "formula: " + phi.str() + "\ntruth set: " +
           mask_str(truth, doc.model.space.points, doc.point_names) +
           "\neverywhere: " +
           (truth == doc.model.space.full() ? "yes" : "no") + "\n");
  return truth == doc.model.space.full() ? kExitValid : kExitInvalid;
}

Json model_json(const TopoModel& m) {
  Json out;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < m.space.points; ++i)
    names.push_back("x" + std::to_string(i));
  out["points"] = names;
  Json topo = Json::array();
  for (const auto& t : m.space.topologies) topo.push_back(t.opens);
  out["topologies"] = topo;
  Json val;
  for (const auto& [var, mask] : m.valuation) val[var] = mask;
  out["valuation"] = val;
  return out;
}

ConsequenceMode parse_mode(const std::string& s) {
  if (s == "local") return ConsequenceMode::Local;
  if (s == "global") return ConsequenceMode::Global;
  if (s == "glocal") return ConsequenceMode::Glocal;
  throw IoError("unknown mode: " + s + " (expected local, global or glocal)");
}

int run_search(const FormulaSet& sigma, const FormulaSet& gamma,
               const Formula& phi, ConsequenceMode mode, std::size_t points,
               std::size_t levels, bool json_mode) {
  auto found = search_countermodel(sigma, gamma, phi, points, levels, mode);
  Json payload;
  payload["countermodel_found"] = found.has_value();
  if (found) {
    payload["model"] = model_json(found->model);
    payload["world"] = found->world;
    emit(json_mode, payload,
         "countermodel found\nworld: x" + std::to_string(found->world) +
             "\n" + model_json(found->model).dump(2) + "\n");
    return kExitInvalid;
  }
  emit(json_mode, payload,
       "no countermodel up to " + std::to_string(points) + " points\n");
  return kExitValid;
}

int cmd_consequence(const std::string& mode_text, const std::string& phi_text,
                    const std::string& sigma_text,
                    const std::string& gamma_text,
                    const std::string& model_path, int world,
                    std::size_t search_points, std::size_t search_levels,
                    bool json_mode) {
  ConsequenceMode mode = parse_mode(mode_text);
  Formula phi = parse_formula(phi_text);
  FormulaSet sigma = parse_set(sigma_text);
  FormulaSet gamma = parse_set(gamma_text);
  if (!model_path.empty()) {
    ModelDocument doc = load_model_file(model_path);
    bool holds = true;
    if (world >= 0) {
      holds = sem_consequence_check(doc.model, static_cast<std::size_t>(world),
                                    sigma, gamma, phi, mode);
    } else {
      for (std::size_t x = 0; x < doc.model.space.points && holds; ++x) {
        holds = sem_consequence_check(doc.model, x, sigma, gamma, phi, mode);
        if (mode == ConsequenceMode::Global) break;
      }
      if (doc.model.space.points == 0 && mode == ConsequenceMode::Global)
        holds = sem_consequence_check(doc.model, 0, sigma, gamma, phi, mode);
    }
    Json payload;
    payload["holds"] = holds;
    emit(json_mode, payload,
         std::string("consequence ") + (holds ? "holds" : "fails") + "\n");
    return holds ? kExitValid : kExitInvalid;
  }
  return run_search(sigma, gamma, phi, mode, search_points, search_levels,
                    json_mode);
}

int cmd_algebra(const std::string& path, bool json_mode) {
  FiniteGLPAlgebra a = load_algebra_file(path);
  AlgebraReport rep = check_glp(a);
  bool founded = rep.ok() && is_box_founded(a, 0);
  Json payload;
  payload["glp"] = rep.ok();
  payload["box_founded"] = founded;
  if (!rep.ok()) payload["violation"] = *rep.violation;
  std::string text = std::string("glp: ") + (rep.ok() ? "pass" : "fail") +
                     "\nbox-founded: " + (founded ? "yes" : "no") + "\n";
  if (!rep.ok()) text += "violation: " + *rep.violation + "\n";
  if (rep.ok()) {
    HeightTable h = heights(a, 0);
    Json jh = Json::array();
    std::string th = "heights:";
    for (std::size_t x = 0; x < a.carrier_size(); ++x) {
      jh.push_back(h[x].str());
      th += " " + h[x].str();
    }
    payload["heights"] = jh;
    text += th + "\n";
  }
  emit(json_mode, payload, text);
  return rep.ok() ? kExitValid : kExitInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proof objects and finite semantic structures for the "
               "polymodal provability logic GLP"};
  app.require_subcommand(1);
  bool json_mode = false;
  app.add_flag("--json", json_mode, "machine-readable JSON reports");

  std::string path, outpath, sigma_text, gamma_text, mode_text = "cyclic";
  std::string phi_text, model_path;
  int world = -1;
  std::size_t search_points = 3, search_levels = 2;
  bool use_file_sets = false;

  auto* check = app.add_subcommand("check", "check a proof file");
  check->add_option("file", path)->required();
  check->add_option("--sigma", sigma_text, "boxed assumptions, ';'-separated");
  check->add_option("--gamma", gamma_text, "local assumptions, ';'-separated");
  check->add_flag("--from-file", use_file_sets,
                  "take sigma/gamma from the proof file");

  auto* classify = app.add_subcommand("classify", "classify assumption leaves");
  classify->add_option("file", path)->required();
  classify->add_option("--mode", mode_text, "cyclic (default) or inf");

  auto* tohil = app.add_subcommand("to-hilbert",
                                   "translate a cyclic proof to a plain one");
  tohil->add_option("file", path)->required();
  tohil->add_option("-o,--output", outpath);

  auto* rv = app.add_subcommand("ravel",
                                "fold a shared-graph presentation into a "
                                "cyclic proof");
  rv->add_option("file", path)->required();
  rv->add_option("-o,--output", outpath);

  auto* toom = app.add_subcommand("to-omega",
                                  "translate a cyclic proof to an omega-lasso "
                                  "proof");
  toom->add_option("file", path)->required();
  toom->add_option("--sigma", sigma_text);
  toom->add_option("--gamma", gamma_text);
  toom->add_option("-o,--output", outpath);

  auto* toinf = app.add_subcommand("to-inf",
                                   "translate an omega-lasso proof to a "
                                   "cyclic presentation");
  toinf->add_option("file", path)->required();
  toinf->add_option("-o,--output", outpath);

  auto* ev = app.add_subcommand("eval", "evaluate a formula in a model file");
  ev->add_option("--model", model_path)->required();
  ev->add_option("--phi", phi_text)->required();

  auto* cons = app.add_subcommand("consequence",
                                  "semantic consequence check or search");
  cons->add_option("--mode", mode_text)->required();
  cons->add_option("--phi", phi_text)->required();
  cons->add_option("--sigma", sigma_text);
  cons->add_option("--gamma", gamma_text);
  cons->add_option("--model", model_path, "check in one model file");
  cons->add_option("--world", world, "world index (default: all)");
  cons->add_option("--search", search_points,
                   "countermodel search up to this many points");
  cons->add_option("--levels", search_levels, "explicit topology levels");

  auto* alg = app.add_subcommand("algebra", "check an algebra file");
  alg->add_option("file", path)->required();

  auto* srch = app.add_subcommand("search", "countermodel search");
  srch->add_option("--phi", phi_text)->required();
  srch->add_option("--sigma", sigma_text);
  srch->add_option("--gamma", gamma_text);
  srch->add_option("--mode", mode_text)->default_val("glocal");
  srch->add_option("--points", search_points);
  srch->add_option("--levels", search_levels);

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed())
      return cmd_check(path, sigma_text, gamma_text, use_file_sets, json_mode);
    if (classify->parsed()) return cmd_classify(path, mode_text, json_mode);
    if (tohil->parsed()) return cmd_to_hilbert(path, outpath, json_mode);
    if (rv->parsed()) return cmd_ravel(path, outpath, json_mode);
    if (toom->parsed())
      return cmd_to_omega(path, sigma_text, gamma_text, outpath, json_mode);
    if (toinf->parsed()) return cmd_to_inf(path, outpath, json_mode);
    if (ev->parsed()) return cmd_eval(model_path, phi_text, json_mode);
    if (cons->parsed())
      return cmd_consequence(mode_text, phi_text, sigma_text, gamma_text,
                             model_path, world, search_points, search_levels,
                             json_mode);
    if (alg->parsed()) return cmd_algebra(path, json_mode);
    if (srch->parsed())
      return run_search(parse_set(sigma_text), parse_set(gamma_text),
                        parse_formula(phi_text), parse_mode(mode_text),
                        search_points, search_levels, json_mode);
  } catch (const ParseError& e) {
    std::cout << "formula error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    std::cout << "file error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const BuildError& e) {
    std::cout << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const AlgebraError& e) {
    std::cout << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const TopologyError& e) {
    std::cout << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const SearchBudgetError& e) {
    std::cout << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
