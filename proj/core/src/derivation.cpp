#include "glp/derivation.hpp"

#include <algorithm>
#include <map>

namespace glp {

std::string_view rule_name(Rule r) {
  switch (r) {
    case Rule::Axiom: return "ax";
    case Rule::Assumption: return "asm";
    case Rule::MP: return "mp";
    case Rule::Nec: return "nec";
    case Rule::Omega: return "omega";
    case Rule::Ref: return "ref";
  }
  return "?";
}

Formula OmegaSpec::phi_at(std::size_t n, const Formula& phi0) const {
  if (n == 0) return phi0;
  std::size_t k = n - 1;  // index into prefix ++ cycle^omega
  if (k < phi_prefix.size()) return phi_prefix[k];
  return phi_cycle[(k - phi_prefix.size()) % phi_cycle.size()];
}

std::size_t OmegaSpec::premise_slot(std::size_t n,
                                    std::size_t child_count) const {
  if (n < prem_prefix) return n;
  std::size_t cycle = child_count - prem_prefix;
  return prem_prefix + (n - prem_prefix) % cycle;
}

std::vector<NodeId> Derivation::parents() const {
  std::vector<NodeId> par(nodes.size(), kNoNode);
  for (NodeId id = 0; id < nodes.size(); ++id)
    for (NodeId c : nodes[id].children)
      if (c < nodes.size()) par[c] = id;
  return par;
}

NodeId Derivation::append_subtree(const Derivation& src, NodeId src_root) {
  std::map<NodeId, NodeId> remap;
  // First pass: copy nodes in DFS preorder.
  std::vector<NodeId> stack{src_root};
  std::vector<NodeId> order;
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    if (remap.count(u)) continue;
    remap[u] = 0;  // placeholder
    order.push_back(u);
    const auto& n = src.at(u);
    for (auto it = n.children.rbegin(); it != n.children.rend(); ++it)
      stack.push_back(*it);
  }
  for (NodeId u : order) {
    ProofNode copy = src.at(u);
    remap[u] = add(std::move(copy));
  }
  // Second pass: fix children and backlinks.
  for (NodeId u : order) {
    ProofNode& n = at(remap[u]);
    for (auto& c : n.children) c = remap.at(c);
    if (n.backlink) n.backlink = remap.at(*n.backlink);
  }
  return remap.at(src_root);
}

namespace {
bool equal_rec(const Derivation& a, NodeId ia, const Derivation& b, NodeId ib,
               std::map<NodeId, std::size_t>& depth_a,
               std::map<NodeId, std::size_t>& depth_b, std::size_t depth) {
  const auto& na = a.at(ia);
  const auto& nb = b.at(ib);
  if (na.formula != nb.formula || na.rule != nb.rule) return false;
  if (na.children.size() != nb.children.size()) return false;
  if (na.backlink.has_value() != nb.backlink.has_value()) return false;
  if (na.backlink) {
    auto da = depth_a.find(*na.backlink);
    auto db = depth_b.find(*nb.backlink);
    if (da == depth_a.end() || db == depth_b.end() || da->second != db->second)
      return false;
  }
  if (na.omega.has_value() != nb.omega.has_value()) return false;
  if (na.omega) {
    if (na.omega->phi_prefix != nb.omega->phi_prefix ||
        na.omega->phi_cycle != nb.omega->phi_cycle ||
        na.omega->prem_prefix != nb.omega->prem_prefix)
      return false;
  }
  depth_a[ia] = depth;
  depth_b[ib] = depth;
  for (std::size_t i = 0; i < na.children.size(); ++i)
    if (!equal_rec(a, na.children[i], b, nb.children[i], depth_a, depth_b,
                   depth + 1))
      return false;
  depth_a.erase(ia);
  depth_b.erase(ib);
  return true;
}
}  // namespace

bool Derivation::equal(const Derivation& a, const Derivation& b) {
  std::map<NodeId, std::size_t> da, db;
  return equal_rec(a, a.root, b, b.root, da, db, 0);
}

std::string_view check_code_name(CheckCode c) {
  switch (c) {
    case CheckCode::NotATree: return "not-a-tree";
    case CheckCode::BadArity: return "bad-arity";
    case CheckCode::BadChildId: return "bad-child-id";
    case CheckCode::MalformedInference: return "malformed-inference";
    case CheckCode::NotAnAxiom: return "not-an-axiom";
    case CheckCode::AtomLimitExceeded: return "atom-limit-exceeded";
    case CheckCode::UnexpectedRule: return "unexpected-rule";
    case CheckCode::BacklinkTargetNotAncestor:
      return "backlink-target-not-ancestor";
    case CheckCode::BacklinkNoNec: return "backlink-no-nec";
    case CheckCode::BacklinkFormulaMismatch: return "backlink-formula-mismatch";
    case CheckCode::BacklinkOnInternalNode: return "backlink-on-internal-node";
    case CheckCode::MalformedLasso: return "malformed-lasso";
    case CheckCode::OmegaPatternMismatch: return "omega-pattern-mismatch";
    case CheckCode::BoxedAssumptionUncovered:
      return "boxed-assumption-uncovered";
    case CheckCode::LocalAssumptionUncovered:
      return "local-assumption-uncovered";
  }
  return "?";
}

std::string CheckIssue::str() const {
  std::string out(check_code_name(code));
  if (node != kNoNode) out += " node=" + std::to_string(node);
  if (position) out += " position=" + std::to_string(*position);
  if (!detail.empty()) out += ": " + detail;
  return out;
}

bool CheckReport::has(CheckCode c) const {
  return std::any_of(issues.begin(), issues.end(),
                     [c](const CheckIssue& i) { return i.code == c; });
}

void CheckReport::add(CheckCode c, NodeId n, std::string detail,
                      std::optional<std::size_t> position) {
  issues.push_back(CheckIssue{c, n, std::move(detail), position});
}

std::string CheckReport::str() const {
  if (ok()) return "ok";
  std::string out;
  for (const auto& i : issues) {
    if (!out.empty()) out += '\n';
    out += i.str();
  }
  return out;
}

FormulaSet LeafClassification::local_formulas() const {
  FormulaSet out;
  for (const auto& e : local) out.insert(e.formula);
  return out;
}
FormulaSet LeafClassification::boxed_formulas() const {
  FormulaSet out;
  for (const auto& e : boxed) out.insert(e.formula);
  return out;
}

CheckReport validate_tree(const Derivation& d) {
  CheckReport report;
  if (d.nodes.empty()) {
    report.add(CheckCode::NotATree, kNoNode, "empty node table");
    return report;
  }
  if (d.root >= d.nodes.size()) {
    report.add(CheckCode::BadChildId, d.root, "root id out of range");
    return report;
  }
  std::vector<int> indeg(d.nodes.size(), 0);
  for (NodeId id = 0; id < d.nodes.size(); ++id) {
    for (NodeId c : d.nodes[id].children) {
      if (c >= d.nodes.size()) {
        report.add(CheckCode::BadChildId, id,
                   "child id " + std::to_string(c) + " out of range");
        return report;
      }
      ++indeg[c];
    }
  }
  if (indeg[d.root] != 0) {
    report.add(CheckCode::NotATree, d.root, "root has a parent");
    return report;
  }
  for (NodeId id = 0; id < d.nodes.size(); ++id) {
    if (id == d.root) continue;
    if (indeg[id] != 1) {
      report.add(CheckCode::NotATree, id,
                 indeg[id] == 0 ? "unreachable node" : "node shared or cyclic");
      return report;
    }
  }
  // In-degrees alone admit disjoint cycles; a reachability pass rules them out.
  std::vector<bool> seen(d.nodes.size(), false);
  std::vector<NodeId> stack{d.root};
  std::size_t count = 0;
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    if (seen[u]) continue;
    seen[u] = true;
    ++count;
    for (NodeId c : d.nodes[u].children) stack.push_back(c);
  }
  if (count != d.nodes.size()) {
    report.add(CheckCode::NotATree, kNoNode, "node table contains a cycle");
  }
  return report;
}

}  // namespace glp
