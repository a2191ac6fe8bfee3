#include "glp/infinitary.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace glp {

namespace {

// Children with back-linked leaves bypassed.  A ref leaf's target is always
// an internal node, so one redirection step suffices.
std::vector<NodeId> redirected_children(const Derivation& d, NodeId u) {
  std::vector<NodeId> out;
  out.reserve(d.at(u).children.size());
  for (NodeId c : d.at(u).children) {
    const ProofNode& n = d.at(c);
    out.push_back(n.rule == Rule::Ref && n.backlink ? *n.backlink : c);
  }
  return out;
}

std::vector<NodeId> reachable_in_graph(const Derivation& d) {
  std::vector<char> seen(d.size(), 0);
  std::vector<NodeId> stack{d.root}, order;
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    if (u >= d.size() || seen[u]) continue;
    seen[u] = 1;
    order.push_back(u);
    for (NodeId c : redirected_children(d, u)) stack.push_back(c);
  }
  return order;
}

// True iff some cycle of the redirected graph avoids nec nodes entirely.
bool has_nec_free_cycle(const Derivation& d) {
  enum { White, Grey, Black };
  std::vector<int> color(d.size(), White);
  auto dfs = [&](auto&& self, NodeId u) -> bool {
    color[u] = Grey;
    if (d.at(u).rule != Rule::Nec) {
      for (NodeId c : redirected_children(d, u)) {
        if (d.at(c).rule == Rule::Nec) continue;  // cycles through nec are fine
        if (color[c] == Grey) return true;
        if (color[c] == White && self(self, c)) return true;
      }
    }
    color[u] = Black;
    return false;
  };
  for (NodeId u : reachable_in_graph(d))
    if (color[u] == White && d.at(u).rule != Rule::Nec && dfs(dfs, u))
      return true;
  return false;
}

// Partition refinement on the redirected graph; nodes with isomorphic
// unfoldings receive equal class ids.
std::vector<std::size_t> subtree_classes(const Derivation& d,
                                         const std::vector<NodeId>& nodes) {
  // Initial colors from (formula, rule); refined by child color vectors.
  std::map<NodeId, std::size_t> cur;
  {
    std::map<std::pair<const void*, int>, std::size_t> ids;
    for (NodeId u : nodes) {
      auto key = std::make_pair(
          static_cast<const void*>(d.at(u).formula.raw()),
          static_cast<int>(d.at(u).rule));
      auto [it, fresh] = ids.emplace(key, ids.size());
      (void)fresh;
      cur[u] = it->second;
    }
  }
  while (true) {
    std::map<std::vector<std::size_t>, std::size_t> ids;
    std::map<NodeId, std::size_t> next;
    for (NodeId u : nodes) {
      std::vector<std::size_t> sig{cur.at(u)};
      for (NodeId c : redirected_children(d, u)) sig.push_back(cur.at(c));
      auto [it, fresh] = ids.emplace(std::move(sig), ids.size());
      (void)fresh;
      next[u] = it->second;
    }
    std::set<std::size_t> old_ids;
    for (auto& [u, c] : cur) old_ids.insert(c);
    bool stable = ids.size() == old_ids.size();
    cur = std::move(next);
    if (stable) break;
  }
  std::vector<std::size_t> out(d.size(), static_cast<std::size_t>(-1));
  for (auto& [u, c] : cur) out[u] = c;
  return out;
}

void check_graph_rules(const Derivation& d, const char* who) {
  CheckReport report;
  if (d.nodes.empty()) throw BuildError(std::string(who) + ": empty graph");
  if (d.root >= d.size())
    throw BuildError(std::string(who) + ": root id out of range");
  for (NodeId u = 0; u < d.size(); ++u)
    for (NodeId c : d.at(u).children)
      if (c >= d.size())
        throw BuildError(std::string(who) + ": child id out of range");
  detail::check_rules(d, report, /*allow_ref=*/true, /*allow_omega=*/false);
  if (!report.ok())
    throw BuildError(std::string(who) + ": " + report.str());
}

}  // namespace

RegularInfDerivation unravel(const Derivation& cyclic) {
  CheckReport report = check_cyclic(cyclic);
  if (!report.ok())
    throw BuildError("unravel: invalid cyclic derivation: " + report.str());
  if (has_nec_free_cycle(cyclic))
    throw BuildError("unravel: presentation has a nec-free cycle");
  return RegularInfDerivation{cyclic};
}

Derivation to_graph(const Derivation& presentation) {
  Derivation out;
  std::vector<NodeId> order = reachable_in_graph(presentation);
  std::map<NodeId, NodeId> remap;
  for (NodeId u : order) {
    ProofNode copy(presentation.at(u).formula, presentation.at(u).rule);
    copy.omega = presentation.at(u).omega;
    remap[u] = out.add(std::move(copy));
  }
  for (NodeId u : order)
    for (NodeId c : redirected_children(presentation, u))
      out.at(remap[u]).children.push_back(remap.at(c));
  out.root = remap.at(presentation.root);
  return out;
}

Derivation ravel(const Derivation& graph) {
  check_graph_rules(graph, "ravel");
  for (NodeId u = 0; u < graph.size(); ++u)
    if (graph.at(u).rule == Rule::Ref)
      throw BuildError("ravel: graph presentations carry shared edges, "
                       "not back-links");
  std::vector<NodeId> order = reachable_in_graph(graph);
  if (order.size() != graph.size())
    throw BuildError("ravel: disconnected graph");
  if (has_nec_free_cycle(graph))
    throw BuildError("ravel: graph has a nec-free cycle");
  std::vector<std::size_t> cls = subtree_classes(graph, order);

  Derivation out;
  struct PathEntry {
    std::size_t cls;
    NodeId tree_id;
    std::size_t nec_above;
  };
  std::vector<PathEntry> path;
  const std::size_t depth_cap = (order.size() + 2) * (order.size() + 2);

  auto unfold = [&](auto&& self, NodeId u, std::size_t nec_above) -> NodeId {
    if (path.size() > depth_cap)
      throw BuildError("ravel: unfolding exceeded the depth bound");
    // Deepest ancestor occurrence of the same class with nec in between.
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      if (it->cls == cls[u] && nec_above > it->nec_above) {
        NodeId leaf = out.add(ProofNode(graph.at(u).formula, Rule::Ref));
        out.at(leaf).backlink = it->tree_id;
        return leaf;
      }
    }
    NodeId id = out.add(ProofNode(graph.at(u).formula, graph.at(u).rule));
    path.push_back(PathEntry{cls[u], id, nec_above});
    std::size_t child_nec =
        nec_above + (graph.at(u).rule == Rule::Nec ? 1 : 0);
    std::vector<NodeId> kids;
    for (NodeId c : graph.at(u).children)
      kids.push_back(self(self, c, child_nec));
    out.at(id).children = std::move(kids);
    path.pop_back();
    return id;
  };
  out.root = unfold(unfold, graph.root, 0);

  CheckReport check = check_cyclic(out);
  if (!check.ok())
    throw std::logic_error("ravel: produced an invalid presentation: " +
                           check.str());
  return out;
}

bool bisimilar(const Derivation& a, const Derivation& b) {
  // Joint refinement over the disjoint union of the redirected graphs.
  Derivation joint;
  NodeId root_a = kNoNode, root_b = kNoNode;
  {
    Derivation ga = to_graph(a);
    Derivation gb = to_graph(b);
    std::map<NodeId, NodeId> ra, rb;
    for (NodeId u = 0; u < ga.size(); ++u) {
      ProofNode copy(ga.at(u).formula, ga.at(u).rule);
      copy.omega = ga.at(u).omega;
      ra[u] = joint.add(std::move(copy));
    }
    for (NodeId u = 0; u < ga.size(); ++u)
      for (NodeId c : ga.at(u).children)
        joint.at(ra[u]).children.push_back(ra.at(c));
    for (NodeId u = 0; u < gb.size(); ++u) {
      ProofNode copy(gb.at(u).formula, gb.at(u).rule);
      copy.omega = gb.at(u).omega;
      rb[u] = joint.add(std::move(copy));
    }
    for (NodeId u = 0; u < gb.size(); ++u)
      for (NodeId c : gb.at(u).children)
        joint.at(rb[u]).children.push_back(rb.at(c));
    root_a = ra.at(ga.root);
    root_b = rb.at(gb.root);
  }
  std::vector<NodeId> nodes(joint.size());
  std::iota(nodes.begin(), nodes.end(), NodeId{0});
  std::vector<std::size_t> cls = subtree_classes(joint, nodes);
  return cls[root_a] == cls[root_b];
}

LeafClassification classify_inf(const RegularInfDerivation& r) {
  std::vector<char> live(r.presentation.size(), 0);
  for (NodeId id = 0; id < r.presentation.size(); ++id)
    if (r.presentation.at(id).rule == Rule::Ref) live[id] = 1;
  return detail::classify_leaves(r.presentation, r.presentation.root, live,
                                 /*exclusive=*/false, ClassifyMode::Inf);
}

// ---------------------------------------------------------------------------
// Slices

const std::vector<NodeId>& SliceSequence::set_at(std::size_t n) const {
  if (n < slice_sets.size()) return slice_sets[n];
  return slice_sets[preperiod + (n - preperiod) % period];
}

Formula SliceSequence::xi(std::size_t n) const {
  if (n < slice_formulas.size()) return slice_formulas[n];
  return slice_formulas[preperiod + (n - preperiod) % period];
}

namespace {

// Breadth-first node order of the redirected presentation graph; used as
// the canonical order of conjuncts inside a slice formula.
std::vector<std::size_t> bfs_rank(const Derivation& d) {
  std::vector<std::size_t> rank(d.size(), static_cast<std::size_t>(-1));
  std::vector<NodeId> queue{d.root};
  rank[d.root] = 0;
  std::size_t next = 1;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    NodeId u = queue[i];
    for (NodeId c : redirected_children(d, u))
      if (rank[c] == static_cast<std::size_t>(-1)) {
        rank[c] = next++;
        queue.push_back(c);
      }
  }
  return rank;
}

// Nec-free closure: members plus everything reachable without entering a
// nec node's premise.
std::set<NodeId> necfree_closure(const Derivation& d, std::set<NodeId> seed) {
  std::vector<NodeId> stack(seed.begin(), seed.end());
  std::set<NodeId> out;
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    if (!out.insert(u).second) continue;
    if (d.at(u).rule == Rule::Nec) continue;
    for (NodeId c : redirected_children(d, u)) stack.push_back(c);
  }
  return out;
}

std::set<NodeId> slice_successor(const Derivation& d,
                                 const std::set<NodeId>& s) {
  std::set<NodeId> seed;
  for (NodeId u : s)
    if (d.at(u).rule == Rule::Nec)
      for (NodeId c : redirected_children(d, u)) seed.insert(c);
  return necfree_closure(d, std::move(seed));
}

Formula slice_formula(const Derivation& d, const std::set<NodeId>& s,
                      const std::vector<std::size_t>& rank) {
  std::vector<NodeId> members(s.begin(), s.end());
  std::sort(members.begin(), members.end(),
            [&](NodeId a, NodeId b) { return rank[a] < rank[b]; });
  std::vector<Formula> conjuncts;
  for (NodeId u : members) {
    Formula f = d.at(u).formula;
    if (std::find(conjuncts.begin(), conjuncts.end(), f) == conjuncts.end())
      conjuncts.push_back(f);
  }
  return fold_conj(conjuncts);
}

}  // namespace

SliceSequence slices(const RegularInfDerivation& r) {
  const Derivation& d = r.presentation;
  std::vector<std::size_t> rank = bfs_rank(d);
  std::map<std::set<NodeId>, std::size_t> seen;
  std::vector<std::set<NodeId>> sets;
  std::set<NodeId> cur = necfree_closure(d, {d.root});
  SliceSequence out;
  while (true) {
    auto it = seen.find(cur);
    if (it != seen.end()) {
      out.preperiod = it->second;
      out.period = sets.size() - it->second;
      break;
    }
    seen.emplace(cur, sets.size());
    sets.push_back(cur);
    cur = slice_successor(d, cur);
  }
  for (const auto& s : sets) {
    out.slice_formulas.push_back(slice_formula(d, s, rank));
    out.slice_sets.emplace_back(s.begin(), s.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// inf -> omega

namespace {
bool has_backlinks(const Derivation& d) {
  return std::any_of(d.nodes.begin(), d.nodes.end(), [](const ProofNode& n) {
    return n.rule == Rule::Ref;
  });
}
}  // namespace

Derivation inf_to_omega(const RegularInfDerivation& r, const FormulaSet& sigma,
                        const FormulaSet& gamma) {
  const Derivation& d = r.presentation;
  LeafClassification cls = classify_inf(r);
  CheckReport coverage;
  detail::check_coverage(cls, sigma, gamma, coverage);
  if (!coverage.ok())
    throw BuildError("inf_to_omega: classification not covered by sigma/gamma: " +
                     coverage.str());
  if (!has_backlinks(d)) {
    // Already well-founded; the derivation is its own omega form.
    Derivation out;
    out.root = out.append_subtree(d);
    Judgment finite_check = check_omega(out, sigma, gamma);
    if (!finite_check.valid())
      throw std::logic_error("inf_to_omega: finite form failed to re-check: " +
                             finite_check.report.str());
    return out;
  }

  SliceSequence sl = slices(r);
  const std::size_t p = sl.preperiod, q = sl.period;

  // Premise D_n proves [0]xi_{n+1} -> xi_n, assembled from per-node
  // derivations of [0]xi_{n+1} -> psi_a over the n-th slice.  Descent
  // happens only through mp edges of the redirected graph, which carry no
  // cycles, so the recursion terminates; nec premises are handled with one
  // boxed tautology instead of a recursive call.
  std::vector<std::size_t> rank = bfs_rank(d);
  std::map<std::pair<std::size_t, NodeId>, Derivation> memo;
  auto per_node = [&](auto&& self, std::size_t n, NodeId a) -> const Derivation& {
    auto key = std::make_pair(n, a);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    Formula goal = Formula::imp(Formula::box(0, sl.xi(n + 1)),
                                d.at(a).formula);
    Derivation result;
    switch (d.at(a).rule) {
      case Rule::Axiom: {
        Derivation ax;
        ax.root = ax.add(ProofNode(d.at(a).formula, Rule::Axiom));
        result = build_by_taut(goal, {&ax});
        break;
      }
      case Rule::Assumption: {
        Derivation asm_leaf;
        asm_leaf.root = asm_leaf.add(ProofNode(d.at(a).formula, Rule::Assumption));
        result = build_by_taut(goal, {&asm_leaf});
        break;
      }
      case Rule::Nec: {
        NodeId b = redirected_children(d, a)[0];
        Derivation t = build_by_taut(
            Formula::imp(sl.xi(n + 1), d.at(b).formula), {});
        result = build_box_mono(t, 0);
        break;
      }
      case Rule::MP: {
        auto kids = redirected_children(d, a);
        const Derivation& lhs = self(self, n, kids[0]);
        const Derivation& rhs = self(self, n, kids[1]);
        result = build_by_taut(goal, {&lhs, &rhs});
        break;
      }
      default:
        throw BuildError("inf_to_omega: unexpected rule in presentation");
    }
    return memo.emplace(key, std::move(result)).first->second;
  };

  std::vector<Derivation> premises;
  for (std::size_t n = 0; n < p + q; ++n) {
    std::vector<NodeId> members = sl.set_at(n);
    std::sort(members.begin(), members.end(),
              [&](NodeId x, NodeId y) { return rank[x] < rank[y]; });
    std::vector<const Derivation*> parts;
    for (NodeId a : members) parts.push_back(&per_node(per_node, n, a));
    premises.push_back(build_by_taut(
        Formula::imp(Formula::box(0, sl.xi(n + 1)), sl.xi(n)), parts));
  }

  // phi_n = xi_n; the formula lasso starts at phi_1, so the prefix holds
  // xi_1 .. xi_{p-1} and the cycle starts where periodicity is reached.
  OmegaSpec spec;
  std::size_t a0 = p > 0 ? p - 1 : 0;  // prefix length of the phi lasso
  for (std::size_t k = 1; k <= a0; ++k) spec.phi_prefix.push_back(sl.xi(k));
  for (std::size_t k = a0 + 1; k <= a0 + q; ++k)
    spec.phi_cycle.push_back(sl.xi(k));
  spec.prem_prefix = p;

  Derivation out;
  std::vector<NodeId> kids;
  for (const auto& prem : premises) kids.push_back(out.append_subtree(prem));
  NodeId omega_node = out.add(ProofNode(sl.xi(0), Rule::Omega, kids));
  out.at(omega_node).omega = spec;
  Derivation taut = build_by_taut(Formula::imp(sl.xi(0), d.conclusion()), {});
  NodeId taut_id = out.append_subtree(taut);
  out.root = out.add(
      ProofNode(d.conclusion(), Rule::MP, {omega_node, taut_id}));

  Judgment check = check_omega(out, sigma, gamma);
  if (!check.valid())
    throw std::logic_error("inf_to_omega: produced an invalid derivation: " +
                           check.report.str());
  return out;
}

// ---------------------------------------------------------------------------
// omega checker

namespace {

std::size_t lcm_size(std::size_t a, std::size_t b) {
  return a / std::gcd(a, b) * b;
}

void check_omega_node(const Derivation& d, NodeId id, CheckReport& report) {
  const ProofNode& n = d.at(id);
  if (!n.omega) {
    report.add(CheckCode::MalformedLasso, id, "omega node without lasso data");
    return;
  }
  const OmegaSpec& spec = *n.omega;
  if (spec.phi_cycle.empty()) {
    report.add(CheckCode::MalformedLasso, id, "empty formula cycle");
    return;
  }
  if (spec.prem_prefix >= n.children.size()) {
    report.add(CheckCode::MalformedLasso, id, "empty premise cycle");
    return;
  }
  std::size_t prem_cycle = n.children.size() - spec.prem_prefix;
  // Complete check window: past s the pair (formula index, premise slot) is
  // a function of n modulo the joint period.
  std::size_t s = std::max(spec.prem_prefix, spec.phi_prefix.size() + 1);
  std::size_t window = s + 2 * lcm_size(spec.phi_cycle.size(), prem_cycle);
  for (std::size_t pos = 0; pos < window; ++pos) {
    Formula expected =
        Formula::imp(Formula::box(0, spec.phi_at(pos + 1, n.formula)),
                     spec.phi_at(pos, n.formula));
    NodeId child = n.children[spec.premise_slot(pos, n.children.size())];
    if (d.at(child).formula != expected) {
      report.add(CheckCode::OmegaPatternMismatch, id,
                 "premise " + std::to_string(pos) + " concludes " +
                     d.at(child).formula.str() + ", expected " +
                     expected.str(),
                 pos);
      return;
    }
  }
}

}  // namespace

CheckReport check_omega_structure(const Derivation& d) {
  CheckReport report = validate_tree(d);
  if (!report.ok()) return report;
  detail::check_rules(d, report, /*allow_ref=*/false, /*allow_omega=*/true);
  for (NodeId id = 0; id < d.size(); ++id)
    if (d.at(id).rule == Rule::Omega) check_omega_node(d, id, report);
  return report;
}

Judgment check_omega(const Derivation& d, const FormulaSet& sigma,
                     const FormulaSet& gamma) {
  Judgment j{sigma, gamma,
             d.nodes.empty() ? Formula::bot() : d.conclusion(),
             LeafClassification{ClassifyMode::Omega, {}, {}},
             {},
             std::make_shared<Derivation>(d)};
  j.report = check_omega_structure(d);
  if (!j.report.ok()) return j;

  // Reachability flags: can a leaf be reached along a path of premise
  // occurrences that never crosses a box (local), or along one that does
  // (boxed)?  Omega premise 0 is the only non-boxed entry.
  auto walk = [&](auto&& self, NodeId u, bool nb, bool bx) -> void {
    const ProofNode& n = d.at(u);
    if (n.children.empty()) {
      if (n.rule != Rule::Assumption) return;
      if (nb) j.classification.local.push_back(LeafEntry{u, n.formula});
      if (bx) j.classification.boxed.push_back(LeafEntry{u, n.formula});
      return;
    }
    switch (n.rule) {
      case Rule::MP:
        for (NodeId c : n.children) self(self, c, nb, bx);
        return;
      case Rule::Nec:
        self(self, n.children[0], false, nb || bx);
        return;
      case Rule::Omega: {
        for (std::size_t jx = 0; jx < n.children.size(); ++jx) {
          bool serves0 = jx == 0;
          bool serves_boxed = jx >= 1 || n.omega->prem_prefix == 0;
          bool child_nb = nb && serves0;
          bool child_bx = (nb && serves_boxed) || (bx && (serves0 || serves_boxed));
          if (child_nb || child_bx)
            self(self, n.children[jx], child_nb, child_bx);
        }
        return;
      }
      default:
        return;
    }
  };
  walk(walk, d.root, true, false);
  detail::check_coverage(j.classification, sigma, gamma, j.report);
  return j;
}

// ---------------------------------------------------------------------------
// omega -> inf

namespace {

struct LadderBuilder {
  const Derivation& w;

  Derivation translate(NodeId u) {
    const ProofNode& n = w.at(u);
    if (n.rule != Rule::Omega) {
      Derivation out;
      std::vector<NodeId> kids;
      std::vector<Derivation> sub;
      for (NodeId c : n.children) sub.push_back(translate(c));
      for (const auto& s : sub) kids.push_back(out.append_subtree(s));
      out.root = out.add(ProofNode(n.formula, n.rule, kids));
      return out;
    }
    const OmegaSpec& spec = *n.omega;
    std::vector<Derivation> prem;
    for (NodeId c : n.children) prem.push_back(translate(c));

    // Equality classes of the translated premises, for the minimal lasso of
    // the joint sequence n |-> (phi_n, premise_n).
    std::vector<std::size_t> prem_class(prem.size());
    for (std::size_t i = 0; i < prem.size(); ++i) {
      prem_class[i] = i;
      for (std::size_t k = 0; k < i; ++k)
        if (prem_class[k] == k && Derivation::equal(prem[i], prem[k])) {
          prem_class[i] = k;
          break;
        }
    }
    std::size_t prem_cycle = prem.size() - spec.prem_prefix;
    std::size_t s0 = std::max(spec.prem_prefix, spec.phi_prefix.size() + 1);
    std::size_t big_l = lcm_size(spec.phi_cycle.size(), prem_cycle);
    std::size_t horizon = s0 + 2 * big_l;
    auto joint = [&](std::size_t pos) {
      return std::make_pair(
          spec.phi_at(pos, n.formula),
          prem_class[spec.premise_slot(pos, prem.size())]);
    };
    // Minimal period dividing big_l, then the least start for it.
    std::size_t best_start = s0, best_period = big_l;
    for (std::size_t cand = 1; cand <= big_l; ++cand) {
      if (big_l % cand != 0) continue;
      std::size_t start = s0;
      while (start > 0) {
        std::size_t pos = start - 1;
        if (joint(pos) == joint(pos + cand)) --start;
        else break;
      }
      bool ok = true;
      for (std::size_t pos = start; pos + cand < horizon; ++pos)
        if (joint(pos) != joint(pos + cand)) { ok = false; break; }
      if (!ok) continue;
      if (start + cand < best_start + best_period ||
          (start + cand == best_start + best_period && cand < best_period)) {
        best_start = start;
        best_period = cand;
      }
    }

    // Rungs 0 .. best_start + best_period - 1; the last nec premise is a
    // back-link to rung best_start.
    Derivation out;
    std::size_t rungs = best_start + best_period;
    std::vector<NodeId> rung_id(rungs);
    NodeId below = kNoNode;
    for (std::size_t pos = rungs; pos-- > 0;) {
      Formula phi_n = spec.phi_at(pos, n.formula);
      Formula phi_n1 = spec.phi_at(pos + 1, n.formula);
      NodeId nec_child;
      if (pos + 1 == rungs) {
        nec_child = out.add(ProofNode(spec.phi_at(best_start, n.formula),
                                      Rule::Ref));
        // target patched after the loop, once rung ids exist
      } else {
        nec_child = below;
      }
      NodeId nec_node = out.add(
          ProofNode(Formula::box(0, phi_n1), Rule::Nec, {nec_child}));
      NodeId prem_id = out.append_subtree(
          prem[spec.premise_slot(pos, prem.size())]);
      NodeId rung = out.add(ProofNode(phi_n, Rule::MP, {nec_node, prem_id}));
      rung_id[pos] = rung;
      below = rung;
    }
    out.root = rung_id[0];
    // Patch the back-link now that the target rung exists.
    for (NodeId id = 0; id < out.size(); ++id)
      if (out.at(id).rule == Rule::Ref && !out.at(id).backlink)
        out.at(id).backlink = rung_id[best_start];
    return out;
  }
};

}  // namespace

RegularInfDerivation omega_to_inf(const Derivation& omega) {
  CheckReport structure = check_omega_structure(omega);
  if (!structure.ok())
    throw BuildError("omega_to_inf: invalid derivation: " + structure.str());
  LadderBuilder builder{omega};
  Derivation out = builder.translate(omega.root);
  return unravel(out);
}

// ---------------------------------------------------------------------------
// Local height

namespace {
std::size_t height_rec(const Derivation& d, NodeId u) {
  const ProofNode& n = d.at(u);
  switch (n.rule) {
    case Rule::Axiom:
    case Rule::Assumption:
    case Rule::Ref:
    case Rule::Nec:  // branch cut at the nec premise
      return 0;
    case Rule::MP: {
      std::size_t best = 0;
      for (NodeId c : n.children)
        best = std::max(best, height_rec(d, c));
      return 1 + best;
    }
    case Rule::Omega:
      // Branches are cut at boxed premises; only premise 0 continues.
      if (n.children.empty())
        throw BuildError("local_height: omega node without premises");
      return 1 + height_rec(d, n.children[0]);
  }
  return 0;
}
}  // namespace

std::size_t local_height(const Derivation& d) {
  CheckReport tree = validate_tree(d);
  if (!tree.ok())
    throw BuildError("local_height: invalid derivation: " + tree.str());
  return height_rec(d, d.root);
}

std::size_t local_height(const RegularInfDerivation& r) {
  return local_height(r.presentation);
}

}  // namespace glp
