#pragma once

#include "glp/derivation.hpp"
#include "glp/hilbert.hpp"

namespace glp {

/// Validates a cyclic derivation: rules ax/asm/mp/nec plus back-linked (ref)
/// leaves.  Each back-link must point at a strict ancestor carrying the same
/// formula, with a nec application on the path between them.
CheckReport check_cyclic(const Derivation& d);

/// Partition of the assumption leaves of a valid cyclic derivation:
/// a leaf is boxed iff its root path crosses a nec application or passes
/// through some back-link target, and local otherwise.  Throws BuildError on
/// invalid input.
LeafClassification classify_cyclic(const Derivation& d);

/// check_cyclic plus sigma/gamma coverage of classify_cyclic.
Judgment check_cyclic_judgment(const Derivation& d, const FormulaSet& sigma,
                               const FormulaSet& gamma);

/// Translates a valid cyclic derivation into an assumption-free Hilbert
/// derivation of
///     (/\ local) & (/\ [0]boxed)  ->  conclusion
/// by back-link elimination: a back-link into the current root is removed
/// first (using boxing, the Loeb scheme and the strengthening
/// s & [0]s of antecedent conjuncts), then the translation descends.
///
/// The two conjunct groups follow the occurrence classification of the
/// unravelling (classify_inf): a leaf whose root path is nec-free counts as
/// local, a leaf whose root path crosses nec or a back-link target counts as
/// boxed, and one leaf may count as both.  On back-link-free derivations
/// this coincides with classify_cyclic.  Within each group, formulas appear
/// in first-occurrence order of a preorder walk, deduplicated; each group is
/// a right-nested conjunction, empty groups are T.
Derivation cyclic_to_hilbert(const Derivation& d);

/// The conclusion formula cyclic_to_hilbert(d) proves (computable without
/// running the translation).
Formula lemma_conclusion(const Derivation& d);

/// Drops T conjuncts of the top-level antecedent pair: (T & B) -> f becomes
/// B -> f, (A & T) -> f becomes A -> f, (T & T) -> f becomes f.  Formulas of
/// any other shape are returned unchanged.
Formula normalize_conclusion(const Formula& f);

namespace detail {

/// Occurrence classification of assumption leaves below `subroot`, treating
/// exactly the leaves flagged in `live` as back-linked.  When `exclusive` a
/// leaf is boxed or local, never both; otherwise a nec-free leaf under a
/// back-link target contributes to both groups.
LeafClassification classify_leaves(const Derivation& d, NodeId subroot,
                                   const std::vector<char>& live,
                                   bool exclusive, ClassifyMode mode);

}  // namespace detail

}  // namespace glp
