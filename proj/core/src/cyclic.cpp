#include "glp/cyclic.hpp"

#include <algorithm>

namespace glp {

CheckReport check_cyclic(const Derivation& d) {
  CheckReport report = validate_tree(d);
  if (!report.ok()) return report;
  detail::check_rules(d, report, /*allow_ref=*/true, /*allow_omega=*/false);
  auto parents = d.parents();
  for (NodeId id = 0; id < d.size(); ++id) {
    const ProofNode& n = d.at(id);
    if (n.rule != Rule::Ref || !n.backlink) continue;
    NodeId target = *n.backlink;
    bool ancestor = false;
    for (NodeId p = parents[id]; p != kNoNode; p = parents[p])
      if (p == target) {
        ancestor = true;
        break;
      }
    if (!ancestor) {
      report.add(CheckCode::BacklinkTargetNotAncestor, id,
                 "target " + std::to_string(target) +
                     " is not a strict ancestor");
      continue;
    }
    if (target < d.size() && d.at(target).formula != n.formula)
      report.add(CheckCode::BacklinkFormulaMismatch, id,
                 "leaf carries " + n.formula.str() + ", target carries " +
                     d.at(target).formula.str());
    bool nec_between = false;
    for (NodeId p = parents[id]; p != kNoNode; p = parents[p]) {
      if (d.at(p).rule == Rule::Nec) nec_between = true;
      if (p == target) break;
    }
    if (!nec_between)
      report.add(CheckCode::BacklinkNoNec, id,
                 "no nec application between target " +
                     std::to_string(target) + " and leaf");
  }
  return report;
}

namespace detail {

namespace {
void classify_rec(const Derivation& d, NodeId u, const std::vector<char>& live,
                  const std::vector<char>& is_target, bool nec_above,
                  bool target_above, bool exclusive,
                  LeafClassification& out) {
  const ProofNode& n = d.at(u);
  if (n.children.empty()) {
    if (n.rule == Rule::Axiom) return;
    if (n.rule == Rule::Ref && live[u]) return;
    bool boxed = nec_above || target_above;
    if (exclusive) {
      (boxed ? out.boxed : out.local).push_back(LeafEntry{u, n.formula});
    } else {
      if (!nec_above) out.local.push_back(LeafEntry{u, n.formula});
      if (boxed) out.boxed.push_back(LeafEntry{u, n.formula});
    }
    return;
  }
  bool child_nec = nec_above || n.rule == Rule::Nec;
  bool child_target = target_above || is_target[u];
  for (NodeId c : n.children)
    classify_rec(d, c, live, is_target, child_nec, child_target, exclusive,
                 out);
}
}  // namespace

LeafClassification classify_leaves(const Derivation& d, NodeId subroot,
                                   const std::vector<char>& live,
                                   bool exclusive, ClassifyMode mode) {
  LeafClassification out;
  out.mode = mode;
  std::vector<char> is_target(d.size(), 0);
  for (NodeId id = 0; id < d.size(); ++id)
    if (live[id] && d.at(id).backlink) is_target[*d.at(id).backlink] = 1;
  classify_rec(d, subroot, live, is_target, false,
               is_target[subroot] != 0, exclusive, out);
  return out;
}

}  // namespace detail

namespace {
std::vector<char> all_backlinks_live(const Derivation& d) {
  std::vector<char> live(d.size(), 0);
  for (NodeId id = 0; id < d.size(); ++id)
    if (d.at(id).rule == Rule::Ref) live[id] = 1;
  return live;
}
}  // namespace

LeafClassification classify_cyclic(const Derivation& d) {
  CheckReport report = check_cyclic(d);
  if (!report.ok())
    throw BuildError("classify_cyclic: invalid derivation: " + report.str());
  return detail::classify_leaves(d, d.root, all_backlinks_live(d),
                                 /*exclusive=*/true, ClassifyMode::Cyclic);
}

Judgment check_cyclic_judgment(const Derivation& d, const FormulaSet& sigma,
                               const FormulaSet& gamma) {
  Judgment j{sigma, gamma,
             d.nodes.empty() ? Formula::bot() : d.conclusion(),
             LeafClassification{ClassifyMode::Cyclic, {}, {}},
             {},
             std::make_shared<Derivation>(d)};
  j.report = check_cyclic(d);
  if (!j.report.ok()) return j;
  j.classification = detail::classify_leaves(
      d, d.root, all_backlinks_live(d), /*exclusive=*/true,
      ClassifyMode::Cyclic);
  detail::check_coverage(j.classification, sigma, gamma, j.report);
  return j;
}

// ---------------------------------------------------------------------------
// Translation to Hilbert derivations

namespace {

// Deduplicated formula lists of an occurrence classification, in
// first-occurrence order of the preorder leaf walk.
struct GroupLists {
  std::vector<Formula> local;
  std::vector<Formula> boxed;
};

std::vector<Formula> dedup_in_order(const std::vector<LeafEntry>& entries) {
  std::vector<Formula> out;
  for (const auto& e : entries)
    if (std::find(out.begin(), out.end(), e.formula) == out.end())
      out.push_back(e.formula);
  return out;
}

GroupLists group_lists(const Derivation& d, NodeId subroot,
                       const std::vector<char>& live) {
  LeafClassification cls = detail::classify_leaves(
      d, subroot, live, /*exclusive=*/false, ClassifyMode::Inf);
  return GroupLists{dedup_in_order(cls.local), dedup_in_order(cls.boxed)};
}

std::vector<Formula> boxed_list(const std::vector<Formula>& fs) {
  std::vector<Formula> out;
  out.reserve(fs.size());
  for (const auto& f : fs) out.push_back(Formula::box(0, f));
  return out;
}

Formula groups_antecedent(const GroupLists& g) {
  return Formula::conj(fold_conj(g.local), fold_conj(boxed_list(g.boxed)));
}

Derivation one_node(const Formula& f, Rule rule) {
  Derivation d;
  d.root = d.add(ProofNode(f, rule));
  return d;
}

struct Translator {
  const Derivation& d;
  std::vector<char> live;
  std::vector<std::vector<NodeId>> backlinks_to;  // target -> live ref leaves

  explicit Translator(const Derivation& deriv)
      : d(deriv), live(all_backlinks_live(deriv)),
        backlinks_to(deriv.size()) {
    for (NodeId id = 0; id < d.size(); ++id)
      if (live[id] && d.at(id).backlink)
        backlinks_to[*d.at(id).backlink].push_back(id);
  }

  // Smallest-id live back-link into `r`, from leaves inside subtree(r).
  std::optional<NodeId> live_backlink_to(NodeId r) const {
    for (NodeId leaf : backlinks_to[r])
      if (live[leaf]) return leaf;
    return std::nullopt;
  }

  // Returns an assumption-free derivation of groups_antecedent -> formula(r)
  // for the sub-derivation rooted at r under the current live set.
  Derivation translate(NodeId r) {
    if (auto b = live_backlink_to(r)) return eliminate_backlink(r, *b);
    const ProofNode& n = d.at(r);
    GroupLists g = group_lists(d, r, live);
    Formula goal = Formula::imp(groups_antecedent(g), n.formula);
    switch (n.rule) {
      case Rule::Axiom: {
        Derivation ax = one_node(n.formula, Rule::Axiom);
        return build_by_taut(goal, {&ax});
      }
      case Rule::Ref:  // dead back-link: behaves as an assumption leaf
      case Rule::Assumption:
        return build_by_taut(goal, {});
      case Rule::MP: {
        Derivation lhs = translate(n.children[0]);
        Derivation rhs = translate(n.children[1]);
        return build_by_taut(goal, {&lhs, &rhs});
      }
      case Rule::Nec: {
        NodeId c = n.children[0];
        Derivation body = translate(c);  // |- ant_c -> eta
        GroupLists gc = group_lists(d, c, live);
        Formula ant_c = groups_antecedent(gc);
        Derivation boxed_imp = build_box_mono(body, 0);  // [0]ant_c -> [0]eta
        std::vector<Formula> elems = gc.local;
        for (const auto& f : boxed_list(gc.boxed)) elems.push_back(f);
        Derivation intro = detail::build_box_of_conj(elems, ant_c);
        std::vector<const Derivation*> premises{&intro, &boxed_imp};
        std::vector<Derivation> trans;
        trans.reserve(gc.boxed.size());
        for (const auto& f : gc.boxed)
          trans.push_back(build_transitivity(f, 0));
        for (const auto& t : trans) premises.push_back(&t);
        return build_by_taut(goal, premises);
      }
      case Rule::Omega:
        throw BuildError("cyclic_to_hilbert: omega node in cyclic derivation");
    }
    throw BuildError("cyclic_to_hilbert: unreachable");
  }

  // The Lemma's back-link elimination: remove the link b -> r, translate the
  // remainder, then restore r's conclusion with boxing and the Loeb scheme.
  Derivation eliminate_backlink(NodeId r, NodeId b) {
    Formula phi = d.at(r).formula;
    live[b] = 0;
    Derivation body = translate(r);  // |- conj(L', [0]B') -> phi, with b in B'
    GroupLists g_prev = group_lists(d, r, live);
    // Boxed formulas of the remainder with leaf b removed.
    LeafClassification cls_prev = detail::classify_leaves(
        d, r, live, /*exclusive=*/false, ClassifyMode::Inf);
    std::vector<LeafEntry> boxed_wo_b;
    for (const auto& e : cls_prev.boxed)
      if (e.leaf != b) boxed_wo_b.push_back(e);
    std::vector<Formula> bminus = dedup_in_order(boxed_wo_b);
    live[b] = 1;

    Formula ant2 = Formula::conj(fold_conj(g_prev.local),
                                 fold_conj(boxed_list(bminus)));
    Derivation r1 = build_by_taut(
        Formula::imp(ant2, Formula::imp(Formula::box(0, phi), phi)), {&body});
    Derivation r2 = build_box_mono(r1, 0);  // [0]ant2 -> [0]([0]phi -> phi)
    std::vector<Formula> elems = g_prev.local;
    for (const auto& f : boxed_list(bminus)) elems.push_back(f);
    Derivation r3 = detail::build_box_of_conj(elems, ant2);
    Derivation loeb = one_node(
        Formula::imp(Formula::box(0, Formula::imp(Formula::box(0, phi), phi)),
                     Formula::box(0, phi)),
        Rule::Axiom);

    GroupLists g = group_lists(d, r, live);
    Formula goal = Formula::imp(groups_antecedent(g), phi);
    std::vector<const Derivation*> premises{&r1, &r2, &r3, &loeb};
    std::vector<Derivation> trans;
    trans.reserve(bminus.size());
    for (const auto& f : bminus) trans.push_back(build_transitivity(f, 0));
    for (const auto& t : trans) premises.push_back(&t);
    return build_by_taut(goal, premises);
  }
};

}  // namespace

Derivation cyclic_to_hilbert(const Derivation& d) {
  CheckReport report = check_cyclic(d);
  if (!report.ok())
    throw BuildError("cyclic_to_hilbert: invalid derivation: " + report.str());
  Translator tr(d);
  return tr.translate(d.root);
}

Formula lemma_conclusion(const Derivation& d) {
  CheckReport report = check_cyclic(d);
  if (!report.ok())
    throw BuildError("lemma_conclusion: invalid derivation: " + report.str());
  GroupLists g = group_lists(d, d.root, all_backlinks_live(d));
  return Formula::imp(groups_antecedent(g), d.conclusion());
}

namespace {
// conj(a, b) is stored as ((a -> (b -> F)) -> F); recover (a, b) if shaped so.
std::optional<std::pair<Formula, Formula>> match_conj(const Formula& f) {
  using K = Formula::Kind;
  if (!f.is(K::Imp) || f.right() != Formula::bot()) return std::nullopt;
  Formula inner = f.left();
  if (!inner.is(K::Imp)) return std::nullopt;
  Formula second = inner.right();
  if (!second.is(K::Imp) || second.right() != Formula::bot())
    return std::nullopt;
  return std::make_pair(inner.left(), second.left());
}
}  // namespace

Formula normalize_conclusion(const Formula& f) {
  if (!f.is(Formula::Kind::Imp)) return f;
  auto parts = match_conj(f.left());
  if (!parts) return f;
  Formula top = Formula::top();
  auto [a, b] = *parts;
  if (a == top && b == top) return f.right();
  if (a == top) return Formula::imp(b, f.right());
  if (b == top) return Formula::imp(a, f.right());
  return f;
}

}  // namespace glp
