// Shared test fixtures: canonical example derivations, a deterministic
// corpus of valid cyclic derivations, and independent oracles used to freeze
// expected values without going through the code paths under test.
#pragma once

#include <algorithm>
#include <vector>

#include "glp/cyclic.hpp"
#include "glp/derivation.hpp"
#include "glp/formula.hpp"
#include "glp/hilbert.hpp"
#include "glp/infinitary.hpp"

namespace glptest {

using namespace glp;

inline Formula F(const std::string& s) { return parse_formula(s); }

// root phi by mp from [nec over back-linked leaf phi] and the assumption
// leaf [0]phi -> phi.
inline Derivation example1(const Formula& phi) {
  Derivation d;
  NodeId root = d.add(ProofNode(phi, Rule::MP));
  NodeId nec = d.add(ProofNode(Formula::box(0, phi), Rule::Nec));
  NodeId ref = d.add(ProofNode(phi, Rule::Ref));
  NodeId leaf =
      d.add(ProofNode(Formula::imp(Formula::box(0, phi), phi), Rule::Assumption));
  d.at(root).children = {nec, leaf};
  d.at(nec).children = {ref};
  d.at(ref).backlink = root;
  d.root = root;
  return d;
}

// mp tree with two assumption leaves: psi, psi -> phi |- phi.
inline Derivation mp_tree(const Formula& psi, const Formula& phi) {
  Derivation d;
  NodeId root = d.add(ProofNode(phi, Rule::MP));
  NodeId minor = d.add(ProofNode(psi, Rule::Assumption));
  NodeId major = d.add(ProofNode(Formula::imp(psi, phi), Rule::Assumption));
  d.at(root).children = {minor, major};
  d.root = root;
  return d;
}

// nec tower of the given height over an assumption leaf.
inline Derivation nec_tower(const Formula& base, std::size_t height) {
  Derivation d;
  NodeId cur = d.add(ProofNode(base, Rule::Assumption));
  Formula f = base;
  for (std::size_t i = 0; i < height; ++i) {
    f = Formula::box(0, f);
    cur = d.add(ProofNode(f, Rule::Nec, {cur}));
  }
  d.root = cur;
  return d;
}

// root p by mp over a nested mp whose nec branch loops to the root:
// p <- mp( q <- mp([0]p <- nec(ref p), [0]p -> q), q -> p ).
// Its only assumption leaves have nec-free paths through the back-link
// target, so they classify local-and-boxed in the occurrence reading.
inline Derivation local_through_target(const Formula& p, const Formula& q) {
  Derivation d;
  NodeId root = d.add(ProofNode(p, Rule::MP));
  NodeId x = d.add(ProofNode(q, Rule::MP));
  NodeId x1 = d.add(ProofNode(Formula::box(0, p), Rule::Nec));
  NodeId ref = d.add(ProofNode(p, Rule::Ref));
  NodeId x2 =
      d.add(ProofNode(Formula::imp(Formula::box(0, p), q), Rule::Assumption));
  NodeId y = d.add(ProofNode(Formula::imp(q, p), Rule::Assumption));
  d.at(root).children = {x, y};
  d.at(x).children = {x1, x2};
  d.at(x1).children = {ref};
  d.at(ref).backlink = root;
  d.root = root;
  return d;
}

// Two back-links into the root:
// phi <- mp([0]phi <- nec(ref), ([0]phi -> phi) <- mp([0]phi <- nec(ref),
//         [0]phi -> ([0]phi -> phi))).
inline Derivation double_backlink(const Formula& phi) {
  Formula bphi = Formula::box(0, phi);
  Derivation d;
  NodeId root = d.add(ProofNode(phi, Rule::MP));
  NodeId n1 = d.add(ProofNode(bphi, Rule::Nec));
  NodeId r1 = d.add(ProofNode(phi, Rule::Ref));
  NodeId b = d.add(ProofNode(Formula::imp(bphi, phi), Rule::MP));
  NodeId n2 = d.add(ProofNode(bphi, Rule::Nec));
  NodeId r2 = d.add(ProofNode(phi, Rule::Ref));
  NodeId leaf = d.add(ProofNode(
      Formula::imp(bphi, Formula::imp(bphi, phi)), Rule::Assumption));
  d.at(root).children = {n1, b};
  d.at(n1).children = {r1};
  d.at(b).children = {n2, leaf};
  d.at(n2).children = {r2};
  d.at(r1).backlink = root;
  d.at(r2).backlink = root;
  d.root = root;
  return d;
}

// Loop rooted below a nec: [0]phi <- nec(example-1 motif at phi).
inline Derivation inner_loop(const Formula& phi) {
  Derivation d;
  NodeId top = d.add(ProofNode(Formula::box(0, phi), Rule::Nec));
  NodeId mid = d.add(ProofNode(phi, Rule::MP));
  NodeId nec = d.add(ProofNode(Formula::box(0, phi), Rule::Nec));
  NodeId ref = d.add(ProofNode(phi, Rule::Ref));
  NodeId leaf =
      d.add(ProofNode(Formula::imp(Formula::box(0, phi), phi), Rule::Assumption));
  d.at(top).children = {mid};
  d.at(mid).children = {nec, leaf};
  d.at(nec).children = {ref};
  d.at(ref).backlink = mid;
  d.root = top;
  return d;
}

// Alternating two-formula ladder with one back-link:
// phi <- mp([0]psi <- nec(psi <- mp([0]phi <- nec(ref phi), [0]phi -> psi)),
//           [0]psi -> phi).
inline Derivation alternating_ladder(const Formula& phi, const Formula& psi) {
  Derivation d;
  NodeId l0 = d.add(ProofNode(phi, Rule::MP));
  NodeId b0 = d.add(ProofNode(Formula::box(0, psi), Rule::Nec));
  NodeId l1 = d.add(ProofNode(psi, Rule::MP));
  NodeId b1 = d.add(ProofNode(Formula::box(0, phi), Rule::Nec));
  NodeId ref = d.add(ProofNode(phi, Rule::Ref));
  NodeId a1 =
      d.add(ProofNode(Formula::imp(Formula::box(0, phi), psi), Rule::Assumption));
  NodeId a0 =
      d.add(ProofNode(Formula::imp(Formula::box(0, psi), phi), Rule::Assumption));
  d.at(l0).children = {b0, a0};
  d.at(b0).children = {l1};
  d.at(l1).children = {b1, a1};
  d.at(b1).children = {ref};
  d.at(ref).backlink = l0;
  d.root = l0;
  return d;
}

// Back-link into an inner node of the same formula, below a deeper tower:
// phi <- mp([0]phi <- nec(phi <- mp([0]phi <- nec(ref -> inner phi),
//           [0]phi -> phi)), [0]phi -> phi).
inline Derivation deep_loop(const Formula& phi) {
  Formula bphi = Formula::box(0, phi);
  Formula side = Formula::imp(bphi, phi);
  Derivation d;
  NodeId root = d.add(ProofNode(phi, Rule::MP));
  NodeId n1 = d.add(ProofNode(bphi, Rule::Nec));
  NodeId m = d.add(ProofNode(phi, Rule::MP));
  NodeId n2 = d.add(ProofNode(bphi, Rule::Nec));
  NodeId ref = d.add(ProofNode(phi, Rule::Ref));
  NodeId s1 = d.add(ProofNode(side, Rule::Assumption));
  NodeId s2 = d.add(ProofNode(side, Rule::Assumption));
  d.at(root).children = {n1, s2};
  d.at(n1).children = {m};
  d.at(m).children = {n2, s1};
  d.at(n2).children = {ref};
  d.at(ref).backlink = m;
  d.root = root;
  return d;
}

// mp over a boxed assumption: q <- mp([0]p <- nec(asm p), asm [0]p -> q).
inline Derivation boxed_local_mix(const Formula& p, const Formula& q) {
  Derivation d;
  NodeId root = d.add(ProofNode(q, Rule::MP));
  NodeId nec = d.add(ProofNode(Formula::box(0, p), Rule::Nec));
  NodeId asm1 = d.add(ProofNode(p, Rule::Assumption));
  NodeId asm2 =
      d.add(ProofNode(Formula::imp(Formula::box(0, p), q), Rule::Assumption));
  d.at(root).children = {nec, asm2};
  d.at(nec).children = {asm1};
  d.root = root;
  return d;
}

inline Derivation single_axiom(const Formula& ax) {
  Derivation d;
  d.root = d.add(ProofNode(ax, Rule::Axiom));
  return d;
}

inline Derivation single_assumption(const Formula& f) {
  Derivation d;
  d.root = d.add(ProofNode(f, Rule::Assumption));
  return d;
}

/// Deterministic corpus of valid cyclic derivations: at most 12 nodes and 3
/// back-links each, mixing back-link-free trees, single and double loops,
/// inner loops, alternating ladders and leaves that classify both local and
/// boxed in the occurrence reading.
inline std::vector<Derivation> cyclic_corpus() {
  Formula p = F("p"), q = F("q");
  Formula lob_p = F("([0]p -> p)");
  std::vector<Derivation> out;
  for (const Formula& phi : {p, q, Formula::box(0, p), Formula::imp(p, q)})
    out.push_back(example1(phi));
  out.push_back(mp_tree(p, q));
  out.push_back(mp_tree(lob_p, p));
  out.push_back(nec_tower(p, 1));
  out.push_back(nec_tower(q, 2));
  out.push_back(local_through_target(p, q));
  out.push_back(local_through_target(q, p));
  out.push_back(double_backlink(p));
  out.push_back(double_backlink(Formula::imp(p, q)));
  out.push_back(inner_loop(p));
  out.push_back(inner_loop(q));
  out.push_back(alternating_ladder(p, q));
  out.push_back(alternating_ladder(Formula::box(0, p), q));
  out.push_back(deep_loop(p));
  out.push_back(deep_loop(q));
  out.push_back(boxed_local_mix(p, q));
  out.push_back(boxed_local_mix(q, p));
  out.push_back(single_axiom(F("([3]([3]p -> p) -> [3]p)")));
  out.push_back(single_axiom(F("([0]p -> [1]p)")));
  out.push_back(single_assumption(p));
  out.push_back(single_assumption(F("(p -> p)")));
  return out;
}

/// Independent recomputation of the conjunct groups of the translated
/// conclusion: a leaf counts local iff its root path has no nec node, boxed
/// iff the path has a nec node or a back-link target; first-occurrence
/// order of a plain preorder walk, deduplicated.
struct OracleGroups {
  std::vector<Formula> local;
  std::vector<Formula> boxed;
};

inline void oracle_walk(const Derivation& d, NodeId u,
                        const std::vector<char>& target, bool nec, bool tgt,
                        OracleGroups& out) {
  const ProofNode& n = d.at(u);
  bool now_tgt = tgt || target[u];
  if (n.children.empty()) {
    if (n.rule != Rule::Assumption) return;
    auto push = [](std::vector<Formula>& v, const Formula& f) {
      if (std::find(v.begin(), v.end(), f) == v.end()) v.push_back(f);
    };
    if (!nec) push(out.local, n.formula);
    if (nec || now_tgt) push(out.boxed, n.formula);
    return;
  }
  for (NodeId c : n.children)
    oracle_walk(d, c, target, nec || n.rule == Rule::Nec, now_tgt, out);
}

inline OracleGroups oracle_groups(const Derivation& d) {
  std::vector<char> target(d.size(), 0);
  for (NodeId id = 0; id < d.size(); ++id)
    if (d.at(id).rule == Rule::Ref && d.at(id).backlink)
      target[*d.at(id).backlink] = 1;
  OracleGroups out;
  oracle_walk(d, d.root, target, false, false, out);
  return out;
}

inline Formula oracle_conclusion(const Derivation& d) {
  OracleGroups g = oracle_groups(d);
  std::vector<Formula> boxed;
  for (const auto& f : g.boxed) boxed.push_back(Formula::box(0, f));
  return Formula::imp(
      Formula::conj(fold_conj(g.local), fold_conj(boxed)),
      d.conclusion());
}

}  // namespace glptest
