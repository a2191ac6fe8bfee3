#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace glp;
using glptest::F;

namespace {

// The infinite ladder with every rung shared: phi <- mp([0]phi <- nec(phi),
// [0]phi -> phi) where the nec premise points back at the root node.
Derivation ladder_graph(const Formula& phi) {
  Derivation g;
  NodeId a = g.add(ProofNode(phi, Rule::MP));
  NodeId b = g.add(ProofNode(Formula::box(0, phi), Rule::Nec));
  NodeId c =
      g.add(ProofNode(Formula::imp(Formula::box(0, phi), phi), Rule::Assumption));
  g.at(a).children = {b, c};
  g.at(b).children = {a};
  g.root = a;
  return g;
}

// Two mutually recursive nec-guarded components sharing a graph.
Derivation mutual_graph(const Formula& phi, const Formula& psi) {
  Derivation g;
  NodeId a = g.add(ProofNode(phi, Rule::MP));
  NodeId na = g.add(ProofNode(Formula::box(0, psi), Rule::Nec));
  NodeId b = g.add(ProofNode(psi, Rule::MP));
  NodeId nb = g.add(ProofNode(Formula::box(0, phi), Rule::Nec));
  NodeId la =
      g.add(ProofNode(Formula::imp(Formula::box(0, psi), phi), Rule::Assumption));
  NodeId lb =
      g.add(ProofNode(Formula::imp(Formula::box(0, phi), psi), Rule::Assumption));
  g.at(a).children = {na, la};
  g.at(na).children = {b};
  g.at(b).children = {nb, lb};
  g.at(nb).children = {a};
  g.root = a;
  return g;
}

Derivation nec_free_cycle_graph() {
  Formula p = F("p");
  Derivation g;
  NodeId a = g.add(ProofNode(p, Rule::MP));
  NodeId b = g.add(ProofNode(Formula::imp(p, p), Rule::Assumption));
  g.at(a).children = {a, b};  // mp whose minor premise is itself
  g.root = a;
  return g;
}

// One omega node: conclusion phi, every premise the assumption
// [0]phi -> phi, constant formula lasso.
Derivation simple_omega(const Formula& phi) {
  Derivation d;
  NodeId prem =
      d.add(ProofNode(Formula::imp(Formula::box(0, phi), phi), Rule::Assumption));
  NodeId node = d.add(ProofNode(phi, Rule::Omega, {prem}));
  OmegaSpec spec;
  spec.phi_cycle = {phi};
  spec.prem_prefix = 0;
  d.at(node).omega = spec;
  d.root = node;
  return d;
}

}  // namespace

TEST_CASE("unravel validates the presentation") {
  Formula p = F("p");
  CHECK_NOTHROW(unravel(glptest::example1(p)));
  CHECK_NOTHROW(unravel(glptest::mp_tree(p, F("q"))));
  Derivation bad = glptest::example1(p);
  bad.at(2).backlink = 3;
  CHECK_THROWS_AS(unravel(bad), BuildError);
}

TEST_CASE("ravel folds the shared ladder into the canonical loop") {
  Formula p = F("p");
  Derivation cyc = ravel(ladder_graph(p));
  CHECK(check_cyclic(cyc).ok());
  CHECK(cyc.size() == 4);
  std::size_t backlinks = 0;
  for (const auto& n : cyc.nodes)
    if (n.rule == Rule::Ref) ++backlinks;
  CHECK(backlinks == 1);
  CHECK(bisimilar(cyc, glptest::example1(p)));
}

TEST_CASE("ravel returns plain trees unchanged") {
  Derivation tree = glptest::mp_tree(F("p"), F("q"));
  Derivation cyc = ravel(tree);
  CHECK(Derivation::equal(cyc, tree));
  for (const auto& n : cyc.nodes) CHECK(n.rule != Rule::Ref);
}

TEST_CASE("ravel handles mutual recursion and rejects bad graphs") {
  Formula p = F("p"), q = F("q");
  Derivation g = mutual_graph(p, q);
  Derivation cyc = ravel(g);
  CHECK(check_cyclic(cyc).ok());
  CHECK(bisimilar(cyc, g));
  CHECK(bisimilar(to_graph(cyc), g));

  CHECK_THROWS_AS(ravel(nec_free_cycle_graph()), BuildError);

  Derivation disconnected = ladder_graph(p);
  disconnected.add(ProofNode(F("q"), Rule::Assumption));
  CHECK_THROWS_AS(ravel(disconnected), BuildError);
}

TEST_CASE("ravel round trip over the corpus is bisimilar") {
  for (const auto& d : glptest::cyclic_corpus()) {
    Derivation g = to_graph(d);
    Derivation back = ravel(g);
    CHECK(check_cyclic(back).ok());
    CHECK(bisimilar(back, d));
  }
}

TEST_CASE("bisimilar distinguishes different unfoldings") {
  Formula p = F("p"), q = F("q");
  CHECK(bisimilar(glptest::example1(p), glptest::example1(p)));
  CHECK_FALSE(bisimilar(glptest::example1(p), glptest::example1(q)));
  CHECK_FALSE(bisimilar(glptest::example1(p), glptest::mp_tree(p, q)));
  // Unrolling the loop once keeps the unfolding isomorphic.
  Derivation unrolled;
  {
    Formula bp = Formula::box(0, p);
    NodeId root = unrolled.add(ProofNode(p, Rule::MP));
    NodeId n1 = unrolled.add(ProofNode(bp, Rule::Nec));
    NodeId mid = unrolled.add(ProofNode(p, Rule::MP));
    NodeId n2 = unrolled.add(ProofNode(bp, Rule::Nec));
    NodeId ref = unrolled.add(ProofNode(p, Rule::Ref));
    NodeId a1 = unrolled.add(ProofNode(Formula::imp(bp, p), Rule::Assumption));
    NodeId a2 = unrolled.add(ProofNode(Formula::imp(bp, p), Rule::Assumption));
    unrolled.at(root).children = {n1, a2};
    unrolled.at(n1).children = {mid};
    unrolled.at(mid).children = {n2, a1};
    unrolled.at(n2).children = {ref};
    unrolled.at(ref).backlink = mid;
    unrolled.root = root;
  }
  CHECK(bisimilar(unrolled, glptest::example1(p)));
}

TEST_CASE("occurrence classification of the unravelling") {
  Formula p = F("p");

  SUBCASE("the canonical loop's side leaf is both local and boxed") {
    LeafClassification cls = classify_inf(unravel(glptest::example1(p)));
    CHECK(cls.local_formulas() == FormulaSet{{F("[0]p -> p")}});
    CHECK(cls.boxed_formulas() == FormulaSet{{F("[0]p -> p")}});
  }

  SUBCASE("a leaf under nec is boxed only") {
    LeafClassification cls = classify_inf(unravel(glptest::nec_tower(p, 1)));
    CHECK(cls.local.empty());
    CHECK(cls.boxed_formulas() == FormulaSet{{p}});
  }

  SUBCASE("a nec-free leaf away from targets is local only") {
    LeafClassification cls = classify_inf(unravel(glptest::mp_tree(p, F("q"))));
    CHECK(cls.boxed.empty());
    CHECK(cls.local_formulas() == FormulaSet{{p, F("p -> q")}});
  }

  SUBCASE("every assumption leaf lands in at least one group") {
    for (const auto& d : glptest::cyclic_corpus()) {
      LeafClassification cls = classify_inf(unravel(d));
      std::vector<char> seen(d.size(), 0);
      for (const auto& e : cls.local) seen[e.leaf] = 1;
      for (const auto& e : cls.boxed) seen[e.leaf] = 1;
      for (NodeId id = 0; id < d.size(); ++id)
        if (d.at(id).rule == Rule::Assumption) CHECK(seen[id]);
    }
  }
}

TEST_CASE("slice decomposition") {
  Formula p = F("p");

  SUBCASE("canonical loop: single repeating slice") {
    SliceSequence sl = slices(unravel(glptest::example1(p)));
    CHECK(sl.preperiod == 0);
    CHECK(sl.period == 1);
    CHECK(sl.xi(0) ==
          Formula::conj(p, Formula::conj(F("[0]p"), F("[0]p -> p"))));
    CHECK(sl.slice_sets[0] == std::vector<NodeId>{0, 1, 3});
  }

  SUBCASE("single node: slice then empty tail") {
    SliceSequence sl = slices(unravel(glptest::single_assumption(p)));
    CHECK(sl.slice_sets[0] == std::vector<NodeId>{0});
    CHECK(sl.xi(0) == p);
    CHECK(sl.xi(1) == Formula::top());  // empty slice of the finite tree
  }

  SUBCASE("alternating ladder: period two") {
    SliceSequence sl =
        slices(unravel(glptest::alternating_ladder(p, F("q"))));
    CHECK(sl.period == 2);
    CHECK(sl.xi(0) != sl.xi(1));
    CHECK(sl.xi(0) == sl.xi(2));
  }

  SUBCASE("preperiod plus period is bounded by the powerset") {
    for (const auto& d : glptest::cyclic_corpus()) {
      SliceSequence sl = slices(unravel(d));
      CHECK(sl.preperiod + sl.period <= (std::size_t{1} << d.size()));
    }
  }
}

TEST_CASE("inf_to_omega on the canonical loop") {
  Formula p = F("p");
  FormulaSet side{{F("[0]p -> p")}};
  Derivation om = inf_to_omega(unravel(glptest::example1(p)), side, side);
  Judgment j = check_omega(om, side, side);
  CHECK(j.valid());
  CHECK(om.conclusion() == p);

  // One omega node with a period-1 premise lasso over xi_0.
  const ProofNode* omega_node = nullptr;
  for (const auto& n : om.nodes)
    if (n.rule == Rule::Omega) omega_node = &n;
  REQUIRE(omega_node != nullptr);
  CHECK(omega_node->omega->phi_prefix.empty());
  CHECK(omega_node->omega->phi_cycle.size() == 1);
  CHECK(omega_node->omega->prem_prefix == 0);
  CHECK(omega_node->children.size() == 1);
  Formula xi0 = Formula::conj(p, Formula::conj(F("[0]p"), F("[0]p -> p")));
  CHECK(omega_node->formula == xi0);
  CHECK(omega_node->omega->phi_cycle[0] == xi0);

  SUBCASE("uncovered classification is refused") {
    CHECK_THROWS_AS(inf_to_omega(unravel(glptest::example1(p)), {}, side),
                    BuildError);
  }
}

TEST_CASE("inf_to_omega leaves finite derivations alone") {
  Formula p = F("p"), q = F("q");
  Derivation tree = glptest::mp_tree(p, q);
  FormulaSet gamma{{p, F("p -> q")}};
  Derivation om = inf_to_omega(unravel(tree), {}, gamma);
  CHECK(Derivation::equal(om, tree));
  CHECK(check_omega(om, {}, gamma).valid());
}

TEST_CASE("check_omega validates the lasso pattern and classification") {
  Formula p = F("p");
  FormulaSet side{{F("[0]p -> p")}};

  SUBCASE("the hand-built single omega node is valid") {
    Judgment j = check_omega(simple_omega(p), side, side);
    CHECK(j.valid());
    // The cycle premise serves occurrence 0 and all later ones.
    CHECK(j.classification.local_formulas() == FormulaSet{{F("[0]p -> p")}});
    CHECK(j.classification.boxed_formulas() == FormulaSet{{F("[0]p -> p")}});
  }

  SUBCASE("boxed occurrences must be covered by sigma") {
    Judgment j = check_omega(simple_omega(p), {}, side);
    CHECK_FALSE(j.valid());
    CHECK(j.report.has(CheckCode::BoxedAssumptionUncovered));
  }

  SUBCASE("shifted premise pattern is rejected with its position") {
    // Formula lasso q, p, q, p, ... but the premise at position 0 concludes
    // [0]p -> q (the n+2 shift) instead of [0]q ... wait: expected is
    // [0]phi_1 -> phi_0 with phi_1 = q; providing [0]p -> q shifts by one.
    Derivation d;
    Formula q = F("q");
    NodeId prem0 =
        d.add(ProofNode(Formula::imp(Formula::box(0, p), q), Rule::Assumption));
    NodeId prem1 =
        d.add(ProofNode(Formula::imp(Formula::box(0, q), p), Rule::Assumption));
    NodeId node = d.add(ProofNode(q, Rule::Omega, {prem0, prem1}));
    OmegaSpec spec;
    spec.phi_cycle = {q, p};  // phi_1 = q, phi_2 = p, ...
    spec.prem_prefix = 0;
    d.at(node).omega = spec;
    d.root = node;
    Judgment j = check_omega(d, FormulaSet{{F("[0]p -> q"), F("[0]q -> p")}},
                             {});
    CHECK_FALSE(j.valid());
    REQUIRE(j.report.has(CheckCode::OmegaPatternMismatch));
    for (const auto& issue : j.report.issues)
      if (issue.code == CheckCode::OmegaPatternMismatch)
        CHECK(issue.position == 0);
  }

  SUBCASE("back-links are rejected inside omega derivations") {
    Derivation d = glptest::example1(p);
    Judgment j = check_omega(d, side, side);
    CHECK_FALSE(j.valid());
    CHECK(j.report.has(CheckCode::UnexpectedRule));
  }

  SUBCASE("misalignment beyond the first premise cycle is still caught") {
    // Formula lasso of period 2 against a premise lasso of period 3: the
    // joint behavior has period 6.  Premise cycle slot 0 serves
    // n = 0, 3, 6, ... and must alternately conclude [0]q -> p and
    // [0]p -> q; a fixed conclusion matches its first use and fails only
    // at n = 3, past the one-full-cycle window.
    Formula q = F("q");
    Formula bp = Formula::box(0, p), bq = Formula::box(0, q);
    Derivation d;
    NodeId c0 = d.add(ProofNode(Formula::imp(bq, p), Rule::Assumption));
    NodeId c1 = d.add(ProofNode(Formula::imp(bp, q), Rule::Assumption));
    NodeId c2 = d.add(ProofNode(Formula::imp(bq, p), Rule::Assumption));
    NodeId node = d.add(ProofNode(p, Rule::Omega, {c0, c1, c2}));
    OmegaSpec spec;
    spec.phi_cycle = {q, p};  // phi_0 = p, phi_1 = q, phi_2 = p, ...
    spec.prem_prefix = 0;
    d.at(node).omega = spec;
    d.root = node;
    CheckReport rep = check_omega_structure(d);
    CHECK_FALSE(rep.ok());
    REQUIRE(rep.has(CheckCode::OmegaPatternMismatch));
    for (const auto& issue : rep.issues)
      if (issue.code == CheckCode::OmegaPatternMismatch)
        CHECK(issue.position == 3);
  }

  SUBCASE("prefix premises beyond the first are boxed only") {
    // prem_prefix = 2 with distinct prefix premises, then a constant cycle.
    Formula bp = Formula::box(0, p);
    Derivation d;
    NodeId d0 = d.add(ProofNode(Formula::imp(bp, p), Rule::Assumption));
    NodeId d1 = d.add(ProofNode(Formula::imp(bp, p), Rule::MP));
    NodeId d1a = d.add(ProofNode(p, Rule::Assumption));
    NodeId d1b = d.add(ProofNode(
        Formula::imp(p, Formula::imp(bp, p)), Rule::Assumption));
    d.at(d1).children = {d1a, d1b};
    NodeId d2 = d.add(ProofNode(Formula::imp(bp, p), Rule::Assumption));
    NodeId node = d.add(ProofNode(p, Rule::Omega, {d0, d1, d2}));
    OmegaSpec spec;
    spec.phi_cycle = {p};
    spec.prem_prefix = 2;
    d.at(node).omega = spec;
    d.root = node;
    FormulaSet sigma{{Formula::imp(bp, p), p,
                      Formula::imp(p, Formula::imp(bp, p))}};
    FormulaSet gamma{{Formula::imp(bp, p)}};
    Judgment j = check_omega(d, sigma, gamma);
    CHECK(j.valid());
    // The leaves of premise 1 never serve occurrence 0.
    for (const auto& e : j.classification.local)
      CHECK(d.at(e.leaf).formula == Formula::imp(bp, p));
  }
}

TEST_CASE("omega_to_inf builds the ladder") {
  Formula p = F("p");

  SUBCASE("single omega node over a constant lasso gives the canonical loop") {
    RegularInfDerivation r = omega_to_inf(simple_omega(p));
    CHECK(check_cyclic(r.presentation).ok());
    CHECK(bisimilar(r.presentation, glptest::example1(p)));
    CHECK(r.presentation.size() == 4);
  }

  SUBCASE("omega-free derivations are unchanged") {
    Derivation tree = glptest::mp_tree(p, F("q"));
    RegularInfDerivation r = omega_to_inf(tree);
    CHECK(Derivation::equal(r.presentation, tree));
  }

  SUBCASE("prefix-2/cycle-1 premise lasso: two straight rungs then a loop") {
    Formula bp = Formula::box(0, p);
    Formula side = Formula::imp(bp, p);
    Derivation d;
    NodeId d0 = d.add(ProofNode(side, Rule::Assumption));
    NodeId d1 = d.add(ProofNode(side, Rule::MP));
    NodeId d1a = d.add(ProofNode(p, Rule::Assumption));
    NodeId d1b =
        d.add(ProofNode(Formula::imp(p, side), Rule::Assumption));
    d.at(d1).children = {d1a, d1b};
    NodeId d2 = d.add(ProofNode(side, Rule::Assumption));
    NodeId node = d.add(ProofNode(p, Rule::Omega, {d0, d1, d2}));
    OmegaSpec spec;
    spec.phi_cycle = {p};
    spec.prem_prefix = 2;
    d.at(node).omega = spec;
    d.root = node;

    RegularInfDerivation r = omega_to_inf(d);
    CHECK(check_cyclic(r.presentation).ok());
    std::size_t mp_nodes = 0, refs = 0;
    for (const auto& n : r.presentation.nodes) {
      if (n.rule == Rule::MP) ++mp_nodes;
      if (n.rule == Rule::Ref) ++refs;
    }
    CHECK(refs == 1);
    CHECK(mp_nodes >= 3);  // two straight rungs, the looping rung, premise 1
    CHECK(local_height(r) == 1);
  }

  SUBCASE("round trip from the loop and back preserves coverage") {
    FormulaSet side{{F("[0]p -> p")}};
    Derivation om = inf_to_omega(unravel(glptest::example1(p)), side, side);
    RegularInfDerivation back = omega_to_inf(om);
    LeafClassification cls = classify_inf(back);
    Judgment j = check_omega(om, side, side);
    CHECK(j.classification.local_formulas().includes(cls.local_formulas()));
    CHECK(j.classification.boxed_formulas().includes(cls.boxed_formulas()));
  }
}

TEST_CASE("translation soundness across the corpus") {
  for (const auto& d : glptest::cyclic_corpus()) {
    RegularInfDerivation r = unravel(d);
    LeafClassification cls = classify_inf(r);
    FormulaSet sigma = cls.boxed_formulas();
    FormulaSet gamma = cls.local_formulas();
    Derivation om = inf_to_omega(r, sigma, gamma);
    Judgment j = check_omega(om, sigma, gamma);
    CHECK(j.valid());
    CHECK(om.conclusion() == d.conclusion());

    RegularInfDerivation back = omega_to_inf(om);
    LeafClassification back_cls = classify_inf(back);
    CHECK(sigma.includes(back_cls.boxed_formulas()));
    CHECK(gamma.includes(back_cls.local_formulas()));
  }
}

TEST_CASE("local heights") {
  Formula p = F("p");
  // The infinite ladder presentation has height 1.
  CHECK(local_height(glptest::example1(p)) == 1);
  // A single omega application has height 1.
  CHECK(local_height(simple_omega(p)) == 1);
  // A single node has height 0.
  CHECK(local_height(glptest::single_assumption(p)) == 0);
  CHECK(local_height(glptest::single_axiom(F("p -> p"))) == 0);
  // mp stacks extend the main fragment; nec cuts it.
  CHECK(local_height(glptest::mp_tree(p, F("q"))) == 1);
  CHECK(local_height(glptest::nec_tower(p, 2)) == 0);
  CHECK(local_height(glptest::local_through_target(p, F("q"))) == 2);
}
