#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "glp/formula.hpp"

namespace glp {

using NodeId = std::size_t;
inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);

/// Node rules shared by every proof kind.  Ref marks a back-linked leaf of a
/// cyclic derivation; it is serialized as an "asm" leaf carrying a backlink.
enum class Rule : std::uint8_t { Axiom, Assumption, MP, Nec, Omega, Ref };

std::string_view rule_name(Rule r);

/// Lasso data of an omega node.  The node's own formula is phi_0; the
/// infinite premise sequence n = 0, 1, ... must conclude [0]phi_{n+1} ->
/// phi_n, where phi_n for n >= 1 is read off phi_prefix followed by the
/// repeating phi_cycle, and premise n is children[n] for prefix positions
/// followed by the repeating premise cycle.
struct OmegaSpec {
  std::vector<Formula> phi_prefix;
  std::vector<Formula> phi_cycle;   // nonempty
  std::size_t prem_prefix = 0;      // children[0..prem_prefix) are the prefix

  Formula phi_at(std::size_t n, const Formula& phi0) const;
  std::size_t premise_slot(std::size_t n, std::size_t child_count) const;
};

struct ProofNode {
  Formula formula;
  Rule rule;
  std::vector<NodeId> children;
  std::optional<NodeId> backlink;   // Rule::Ref leaves only
  std::optional<OmegaSpec> omega;   // Rule::Omega only

  ProofNode(Formula f, Rule r, std::vector<NodeId> ch = {})
      : formula(std::move(f)), rule(r), children(std::move(ch)) {}
};

/// A rooted proof object.  Plain Hilbert derivations use rules Axiom,
/// Assumption, MP, Nec and no backlinks; cyclic derivations add Ref leaves;
/// omega derivations add Omega nodes and forbid backlinks.  Shared-graph
/// presentations reuse the same node table without the tree constraint.
struct Derivation {
  std::vector<ProofNode> nodes;
  NodeId root = 0;

  std::size_t size() const { return nodes.size(); }
  const ProofNode& at(NodeId id) const { return nodes.at(id); }
  ProofNode& at(NodeId id) { return nodes.at(id); }
  Formula conclusion() const { return nodes.at(root).formula; }

  NodeId add(ProofNode n) {
    nodes.push_back(std::move(n));
    return nodes.size() - 1;
  }

  /// Parent of each node, kNoNode for the root.  Only meaningful after
  /// validate_tree passes.
  std::vector<NodeId> parents() const;

  /// Copies the subtree of `src` rooted at `src_root` into *this, remapping
  /// ids (including internal backlinks).  Returns the new root id.
  NodeId append_subtree(const Derivation& src, NodeId src_root);
  NodeId append_subtree(const Derivation& src) {
    return append_subtree(src, src.root);
  }

  /// Structural equality of rooted trees (formulas, rules, lasso data and
  /// backlink shape); node numbering is irrelevant.
  static bool equal(const Derivation& a, const Derivation& b);
};

enum class CheckCode : std::uint8_t {
  NotATree,
  BadArity,
  BadChildId,
  MalformedInference,
  NotAnAxiom,
  AtomLimitExceeded,
  UnexpectedRule,
  BacklinkTargetNotAncestor,
  BacklinkNoNec,
  BacklinkFormulaMismatch,
  BacklinkOnInternalNode,
  MalformedLasso,
  OmegaPatternMismatch,
  BoxedAssumptionUncovered,
  LocalAssumptionUncovered,
};

std::string_view check_code_name(CheckCode c);

struct CheckIssue {
  CheckCode code;
  NodeId node = kNoNode;
  std::string detail;
  std::optional<std::size_t> position;  // omega premise index, when relevant

  std::string str() const;
};

struct CheckReport {
  std::vector<CheckIssue> issues;
  bool ok() const { return issues.empty(); }
  bool has(CheckCode c) const;
  void add(CheckCode c, NodeId n, std::string detail,
           std::optional<std::size_t> position = std::nullopt);
  std::string str() const;
};

enum class ClassifyMode : std::uint8_t { Hilbert, Cyclic, Inf, Omega };

/// Boxed/local classification of assumption leaves, with leaf identifiers so
/// that one formula occurring at several leaves is tracked per occurrence.
/// In Hilbert and Cyclic modes the two sets partition the assumption leaves;
/// in Inf and Omega modes one leaf may appear in both.
struct LeafEntry {
  NodeId leaf;
  Formula formula;
};

struct LeafClassification {
  ClassifyMode mode = ClassifyMode::Hilbert;
  std::vector<LeafEntry> local;
  std::vector<LeafEntry> boxed;

  FormulaSet local_formulas() const;
  FormulaSet boxed_formulas() const;
};

/// Outcome of checking a derivation against Sigma (boxed) and Gamma (local).
struct Judgment {
  FormulaSet sigma;
  FormulaSet gamma;
  Formula conclusion;
  LeafClassification classification;
  CheckReport report;
  std::shared_ptr<const Derivation> witness;

  bool valid() const { return report.ok(); }
};

/// Checks that the node table is a tree rooted at `root`: every node
/// reachable, exactly one parent each, children ids in range.
CheckReport validate_tree(const Derivation& d);

}  // namespace glp
