#pragma once

#include "glp/cyclic.hpp"
#include "glp/derivation.hpp"

namespace glp {

/// A regular non-well-founded derivation, represented by the cyclic
/// presentation whose unravelling it is.  Constructed by unravel, ravel or
/// omega_to_inf, all of which validate the presentation.
struct RegularInfDerivation {
  Derivation presentation;
};

/// Views a valid cyclic derivation as the finite presentation of its
/// unravelling, additionally verifying that every cycle of the presentation
/// crosses a nec application.  Throws BuildError on invalid input.
RegularInfDerivation unravel(const Derivation& cyclic);

/// Shared-graph view of a presentation: back-linked leaves are bypassed, so
/// edges may share nodes and form nec-guarded cycles.  The result is a node
/// table with the tree constraint dropped (unreachable leftovers removed).
Derivation to_graph(const Derivation& presentation);

/// Ravels a shared-graph presentation into a cyclic derivation whose
/// unravelling is bisimilar to the graph's unfolding.  Nodes are identified
/// by subtree class (partition refinement); the unfolding is cut at the
/// deepest ancestor of equal class with a nec application in between.
/// Throws BuildError when the graph is disconnected, rule-invalid or has a
/// nec-free cycle.
Derivation ravel(const Derivation& graph);

/// True iff the unfoldings of the two presentations (cyclic or shared-graph)
/// are isomorphic as ordered trees.
bool bisimilar(const Derivation& a, const Derivation& b);

/// Occurrence classification of the unravelling, computed on the
/// presentation: a leaf contributes a local requirement iff its tree path is
/// nec-free, and a boxed requirement iff its tree path crosses nec or passes
/// through a back-link target.  One leaf may contribute both.
LeafClassification classify_inf(const RegularInfDerivation& r);

/// Slice decomposition of the unravelling by nec depth, as sets of
/// presentation nodes.  slice_sets[n] is the set of nodes with an occurrence
/// exactly n nec applications below the root; xi_n is the conjunction of
/// their formulas in breadth-first order (deduplicated).  The set sequence
/// is eventually periodic: slice_sets has preperiod + period entries and
/// slice n = slice (preperiod + (n - preperiod) mod period) for any n.
/// A back-link-free presentation reaches the empty slice, which then
/// repeats forever (xi = T).
struct SliceSequence {
  std::size_t preperiod = 0;
  std::size_t period = 1;
  std::vector<Formula> slice_formulas;
  std::vector<std::vector<NodeId>> slice_sets;

  const std::vector<NodeId>& set_at(std::size_t n) const;
  Formula xi(std::size_t n) const;
};

SliceSequence slices(const RegularInfDerivation& r);

/// Translates a regular derivation into a lasso-presented omega derivation
/// with the same conclusion and the same sigma/gamma bound: one omega node
/// over premises D_n proving [0]xi_{n+1} -> xi_n, followed by mp with the
/// tautology xi_0 -> conclusion.  A back-link-free presentation is already
/// well-founded and is returned unchanged.  Requires classify_inf(r) to be
/// covered by sigma/gamma; the output is re-checked before returning.
Derivation inf_to_omega(const RegularInfDerivation& r, const FormulaSet& sigma,
                        const FormulaSet& gamma);

/// Replaces every omega node by the equivalent ladder of mp/nec rungs; lasso
/// periodicity closes the ladder with a back-link.  The output presentation
/// is re-checked before returning.
RegularInfDerivation omega_to_inf(const Derivation& omega);

/// Structural validity of an omega-lasso derivation: a well-founded tree
/// over ax/asm/mp/nec/omega, no back-links, with every omega premise
/// matching the pattern [0]phi_{n+1} -> phi_n across the lasso.  The
/// premise pattern is verified for n up to
///     max(premise prefix, formula prefix + 1) + 2 * lcm(cycle lengths),
/// which covers one full joint period beyond both eventual-periodicity
/// thresholds and is therefore complete.
CheckReport check_omega_structure(const Derivation& d);

/// check_omega_structure plus leaf classification and sigma/gamma coverage.
/// A leaf is boxed iff some path to it in the unfolding of premise
/// occurrences crosses a nec application or a boxed omega premise
/// (occurrence n >= 1), and local iff some such path crosses neither.
/// Premises serving both occurrence 0 and a later occurrence contribute to
/// both sets.
Judgment check_omega(const Derivation& d, const FormulaSet& sigma,
                     const FormulaSet& gamma);

/// Length of the longest branch of the main fragment: branches are cut at
/// nec premises and at boxed omega premises.  A single node has height 0.
std::size_t local_height(const Derivation& d);
std::size_t local_height(const RegularInfDerivation& r);

}  // namespace glp
