#include "glp/hilbert.hpp"

#include <algorithm>

namespace glp {

std::string_view axiom_kind_name(AxiomKind k) {
  switch (k) {
    case AxiomKind::Tautology: return "i";
    case AxiomKind::Distribution: return "ii";
    case AxiomKind::Loeb: return "iii";
    case AxiomKind::DiamondShift: return "iv";
    case AxiomKind::Monotone: return "v";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Propositional evaluation over modal atoms.
//
// Formulas are compiled to a postfix program over atom indices and evaluated
// 64 assignments per word: atoms 0..5 are laid out as bit patterns inside a
// word, the remaining atoms are enumerated by an outer loop.

namespace {

enum class Op : std::uint8_t { Atom, False, Imp };

struct PropProgram {
  std::vector<std::pair<Op, std::uint32_t>> code;
  std::vector<Formula> atoms;  // sorted
};

void compile(const Formula& f, const PropProgram& prog,
             std::vector<std::pair<Op, std::uint32_t>>& code) {
  switch (f.kind()) {
    case Formula::Kind::Bot:
      code.emplace_back(Op::False, 0);
      return;
    case Formula::Kind::Imp:
      compile(f.left(), prog, code);
      compile(f.right(), prog, code);
      code.emplace_back(Op::Imp, 0);
      return;
    case Formula::Kind::Var:
    case Formula::Kind::Box: {
      auto it = std::lower_bound(prog.atoms.begin(), prog.atoms.end(), f,
                                 FormulaLess{});
      code.emplace_back(Op::Atom,
                        static_cast<std::uint32_t>(it - prog.atoms.begin()));
      return;
    }
  }
}

PropProgram compile_program(const Formula& f) {
  PropProgram prog;
  prog.atoms = modal_atoms(f).items();
  compile(f, prog, prog.code);
  return prog;
}

constexpr std::uint64_t kAtomPattern[6] = {
    0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
    0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL,
};

bool all_assignments_true(const PropProgram& prog) {
  const std::size_t n = prog.atoms.size();
  const std::size_t outer_bits = n > 6 ? n - 6 : 0;
  const std::uint64_t valid =
      n >= 6 ? ~0ULL : ((1ULL << (std::size_t{1} << n)) - 1);
  std::vector<std::uint64_t> stack(prog.code.size() + 1);
  for (std::uint64_t high = 0; high < (1ULL << outer_bits); ++high) {
    std::size_t sp = 0;
    for (const auto& [op, arg] : prog.code) {
      switch (op) {
        case Op::False:
          stack[sp++] = 0;
          break;
        case Op::Atom:
          stack[sp++] = arg < 6 ? kAtomPattern[arg]
                                : ((high >> (arg - 6)) & 1 ? ~0ULL : 0ULL);
          break;
        case Op::Imp: {
          std::uint64_t b = stack[--sp];
          std::uint64_t a = stack[sp - 1];
          stack[sp - 1] = ~a | b;
          break;
        }
      }
    }
    if ((stack[0] & valid) != valid) return false;
  }
  return true;
}

}  // namespace

bool is_tautology(const Formula& f, std::size_t atom_limit) {
  PropProgram prog = compile_program(f);
  if (prog.atoms.size() > atom_limit)
    throw AtomLimitError(prog.atoms.size(), atom_limit);
  return all_assignments_true(prog);
}

std::optional<AxiomKind> is_axiom(const Formula& f, std::size_t atom_limit) {
  try {
    if (is_tautology(f, atom_limit)) return AxiomKind::Tautology;
  } catch (const AtomLimitError&) {
    // Too wide for scheme (i); fall through to the shape-matched schemes.
  }
  if (!f.is(Formula::Kind::Imp)) return std::nullopt;
  const Formula lhs = f.left(), rhs = f.right();
  using K = Formula::Kind;
  // (ii) [i](a -> b) -> ([i]a -> [i]b)
  if (lhs.is(K::Box) && lhs.box_body().is(K::Imp) && rhs.is(K::Imp)) {
    std::size_t i = lhs.box_index();
    Formula a = lhs.box_body().left(), b = lhs.box_body().right();
    if (rhs.left() == Formula::box(i, a) && rhs.right() == Formula::box(i, b))
      return AxiomKind::Distribution;
  }
  // (iii) [i]([i]a -> a) -> [i]a
  if (lhs.is(K::Box) && lhs.box_body().is(K::Imp) && rhs.is(K::Box) &&
      lhs.box_index() == rhs.box_index()) {
    Formula body = lhs.box_body();
    if (body.left() == rhs && body.right() == rhs.box_body())
      return AxiomKind::Loeb;
  }
  // (iv) <i>a -> [i+1]<i>a, desugared: (([i](a->F))->F) -> [i+1](([i](a->F))->F)
  if (lhs.is(K::Imp) && lhs.right() == Formula::bot() && lhs.left().is(K::Box) &&
      lhs.left().box_body().is(K::Imp) &&
      lhs.left().box_body().right() == Formula::bot() && rhs.is(K::Box) &&
      rhs.box_index() == lhs.left().box_index() + 1 && rhs.box_body() == lhs)
    return AxiomKind::DiamondShift;
  // (v) [i]a -> [i+1]a
  if (lhs.is(K::Box) && rhs.is(K::Box) &&
      rhs.box_index() == lhs.box_index() + 1 &&
      lhs.box_body() == rhs.box_body())
    return AxiomKind::Monotone;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Checker

namespace {

void check_rule_local(const Derivation& d, NodeId id, CheckReport& report,
                      bool allow_ref, bool allow_omega) {
  const ProofNode& n = d.at(id);
  if (n.backlink && n.rule != Rule::Ref) {
    report.add(CheckCode::BacklinkOnInternalNode, id,
               "backlink on a node with rule " + std::string(rule_name(n.rule)));
    return;
  }
  switch (n.rule) {
    case Rule::Axiom:
      if (!n.children.empty()) {
        report.add(CheckCode::BadArity, id, "axiom node with premises");
        return;
      }
      try {
        if (!is_axiom(n.formula)) {
          report.add(CheckCode::NotAnAxiom, id, n.formula.str());
        }
      } catch (const AtomLimitError& e) {
        report.add(CheckCode::AtomLimitExceeded, id, e.what());
      }
      return;
    case Rule::Assumption:
      if (!n.children.empty())
        report.add(CheckCode::BadArity, id, "assumption node with premises");
      return;
    case Rule::MP: {
      if (n.children.size() != 2) {
        report.add(CheckCode::BadArity, id, "mp expects two premises");
        return;
      }
      Formula minor = d.at(n.children[0]).formula;
      Formula major = d.at(n.children[1]).formula;
      Formula expected = Formula::imp(minor, n.formula);
      if (major != expected)
        report.add(CheckCode::MalformedInference, id,
                   "mp major premise is " + major.str() + ", expected " +
                       expected.str());
      return;
    }
    case Rule::Nec: {
      if (n.children.size() != 1) {
        report.add(CheckCode::BadArity, id, "nec expects one premise");
        return;
      }
      Formula expected = Formula::box(0, d.at(n.children[0]).formula);
      if (n.formula != expected)
        report.add(CheckCode::MalformedInference, id,
                   "nec concludes " + n.formula.str() + ", expected " +
                       expected.str());
      return;
    }
    case Rule::Ref:
      if (!allow_ref)
        report.add(CheckCode::UnexpectedRule, id,
                   "back-links are not allowed here");
      else if (!n.children.empty())
        report.add(CheckCode::BadArity, id, "back-linked leaf with premises");
      else if (!n.backlink)
        report.add(CheckCode::MalformedInference, id,
                   "ref leaf without backlink target");
      return;
    case Rule::Omega:
      if (!allow_omega)
        report.add(CheckCode::UnexpectedRule, id,
                   "the omega rule is not allowed here");
      return;
  }
}

}  // namespace

namespace detail {

// Shared by the hilbert and cyclic checkers.
void check_rules(const Derivation& d, CheckReport& report, bool allow_ref,
                 bool allow_omega) {
  for (NodeId id = 0; id < d.size(); ++id)
    check_rule_local(d, id, report, allow_ref, allow_omega);
}

void check_coverage(const LeafClassification& cls, const FormulaSet& sigma,
                    const FormulaSet& gamma, CheckReport& report) {
  for (const auto& e : cls.boxed)
    if (!sigma.contains(e.formula))
      report.add(CheckCode::BoxedAssumptionUncovered, e.leaf,
                 e.formula.str() + " not in sigma");
  for (const auto& e : cls.local)
    if (!gamma.contains(e.formula))
      report.add(CheckCode::LocalAssumptionUncovered, e.leaf,
                 e.formula.str() + " not in gamma");
}

}  // namespace detail

Judgment check_hilbert(const Derivation& d, const FormulaSet& sigma,
                       const FormulaSet& gamma) {
  Judgment j{sigma, gamma,
             d.nodes.empty() ? Formula::bot() : d.conclusion(),
             LeafClassification{ClassifyMode::Hilbert, {}, {}},
             {},
             std::make_shared<Derivation>(d)};
  j.report = validate_tree(d);
  if (!j.report.ok()) return j;
  detail::check_rules(d, j.report, /*allow_ref=*/false,
                            /*allow_omega=*/false);

  auto parents = d.parents();
  for (NodeId id = 0; id < d.size(); ++id) {
    const ProofNode& n = d.at(id);
    if (n.rule != Rule::Assumption) continue;
    bool boxed = false;
    for (NodeId p = parents[id]; p != kNoNode; p = parents[p])
      if (d.at(p).rule == Rule::Nec) {
        boxed = true;
        break;
      }
    (boxed ? j.classification.boxed : j.classification.local)
        .push_back(LeafEntry{id, n.formula});
  }
  detail::check_coverage(j.classification, sigma, gamma, j.report);
  return j;
}

// ---------------------------------------------------------------------------
// Builders

namespace {

constexpr std::size_t kBuilderAtomLimit = 22;

void require_assumption_free(const Derivation& d, const char* who) {
  for (const auto& n : d.nodes) {
    if (n.rule == Rule::Assumption || n.rule == Rule::Ref)
      throw BuildError(std::string(who) + ": input derivation has assumptions");
    if (n.rule == Rule::Omega)
      throw BuildError(std::string(who) + ": input contains an omega node");
  }
}

Derivation build_by_taut_impl(const Formula& goal,
                              const std::vector<const Derivation*>& premises) {
  Formula curried = goal;
  for (auto it = premises.rbegin(); it != premises.rend(); ++it)
    curried = Formula::imp((*it)->conclusion(), curried);
  bool taut = false;
  try {
    taut = is_tautology(curried, kBuilderAtomLimit);
  } catch (const AtomLimitError& e) {
    throw BuildError(std::string("build_by_taut: ") + e.what());
  }
  if (!taut)
    throw BuildError("build_by_taut: goal is not a tautological consequence: " +
                     curried.str());
  Derivation out;
  NodeId cur = out.add(ProofNode(curried, Rule::Axiom));
  Formula rest = curried;
  for (const Derivation* p : premises) {
    NodeId pid = out.append_subtree(*p);
    rest = rest.right();
    cur = out.add(ProofNode(rest, Rule::MP, {pid, cur}));
  }
  out.root = cur;
  return out;
}

// From |- [i](a -> b), derive |- [i]a -> [i]b by scheme (ii) and mp.
Derivation distribute_box(const Derivation& boxed_imp, std::size_t index) {
  Formula body = boxed_imp.conclusion().box_body();
  Formula kax = Formula::imp(
      boxed_imp.conclusion(),
      Formula::imp(Formula::box(index, body.left()),
                   Formula::box(index, body.right())));
  Derivation out;
  NodeId base = out.append_subtree(boxed_imp);
  NodeId ax = out.add(ProofNode(kax, Rule::Axiom));
  out.root = out.add(ProofNode(kax.right(), Rule::MP, {base, ax}));
  return out;
}

}  // namespace

Derivation build_by_taut(const Formula& goal,
                         std::span<const Derivation> premises) {
  std::vector<const Derivation*> ptrs;
  ptrs.reserve(premises.size());
  for (const auto& p : premises) ptrs.push_back(&p);
  return build_by_taut_impl(goal, ptrs);
}

Derivation build_by_taut(const Formula& goal,
                         std::initializer_list<const Derivation*> premises) {
  return build_by_taut_impl(goal, std::vector<const Derivation*>(premises));
}

Derivation build_by_taut(const Formula& goal,
                         const std::vector<const Derivation*>& premises) {
  return build_by_taut_impl(goal, premises);
}

Derivation build_box_mono(const Derivation& d, std::size_t index) {
  if (index != 0)
    throw BuildError("build_box_mono: nec is available for box 0 only");
  require_assumption_free(d, "build_box_mono");
  if (!d.conclusion().is(Formula::Kind::Imp))
    throw BuildError("build_box_mono: conclusion is not an implication");
  Derivation out;
  NodeId base = out.append_subtree(d);
  NodeId nec = out.add(
      ProofNode(Formula::box(0, d.conclusion()), Rule::Nec, {base}));
  out.root = nec;
  return distribute_box(out, 0);
}

namespace detail {

Derivation build_nec_theorem(const Derivation& d, std::size_t index) {
  require_assumption_free(d, "build_nec_theorem");
  Derivation out;
  NodeId cur = out.append_subtree(d);
  Formula t = d.conclusion();
  cur = out.add(ProofNode(Formula::box(0, t), Rule::Nec, {cur}));
  for (std::size_t j = 0; j < index; ++j) {
    Formula ax = Formula::imp(Formula::box(j, t), Formula::box(j + 1, t));
    NodeId axid = out.add(ProofNode(ax, Rule::Axiom));
    cur = out.add(ProofNode(ax.right(), Rule::MP, {cur, axid}));
  }
  out.root = cur;
  return out;
}

Derivation build_box_of_conj(const std::vector<Formula>& conjuncts,
                             const Formula& target) {
  // |- c1 -> (c2 -> ... -> target) as a tautology axiom, boxed, then
  // distributed conjunct by conjunct with scheme (ii) into
  // |- [0]c1 -> ([0]c2 -> ... -> [0]target), and finally folded.
  Formula curried = target;
  for (auto it = conjuncts.rbegin(); it != conjuncts.rend(); ++it)
    curried = Formula::imp(*it, curried);
  Derivation chain = build_nec_theorem(build_by_taut(curried, {}), 0);
  Formula rest = curried;
  for (std::size_t j = 0; j < conjuncts.size(); ++j) {
    // chain proves  [0]c1 -> ... -> [0]c_{j-1} -> [0](c_j -> rest')
    Formula boxed_step = Formula::box(0, rest);
    Formula next_rest = rest.right();
    Formula kax = Formula::imp(
        boxed_step, Formula::imp(Formula::box(0, conjuncts[j]),
                                 Formula::box(0, next_rest)));
    Derivation axd;
    axd.root = axd.add(ProofNode(kax, Rule::Axiom));
    Formula goal = Formula::box(0, next_rest);
    for (std::size_t r = j + 1; r-- > 0;)
      goal = Formula::imp(Formula::box(0, conjuncts[r]), goal);
    chain = build_by_taut(goal, {&chain, &axd});
    rest = next_rest;
  }
  std::vector<Formula> boxed;
  boxed.reserve(conjuncts.size());
  for (const Formula& c : conjuncts) boxed.push_back(Formula::box(0, c));
  return build_by_taut(
      Formula::imp(fold_conj(boxed), Formula::box(0, target)), {&chain});
}

}  // namespace detail

Derivation build_transitivity(const Formula& f, std::size_t index) {
  using detail::build_nec_theorem;
  Formula bf = Formula::box(index, f);
  Formula s = Formula::conj(f, bf);  // f & [i]f
  Formula bs = Formula::box(index, s);

  // L1: |- [i]s -> [i]f        from the tautology s -> f
  Derivation l1 =
      distribute_box(build_nec_theorem(build_by_taut(Formula::imp(s, f), {}), index), index);
  // L2: |- [i]s -> [i][i]f     from the tautology s -> [i]f
  Derivation l2 =
      distribute_box(build_nec_theorem(build_by_taut(Formula::imp(s, bf), {}), index), index);
  // L3: |- f -> ([i]s -> s)    tautological consequence of L1
  Derivation l3 =
      build_by_taut(Formula::imp(f, Formula::imp(bs, s)), {&l1});
  // L4: |- [i]f -> [i]([i]s -> s)
  Derivation l4 = distribute_box(build_nec_theorem(l3, index), index);
  // L5: Loeb for s at level i
  Derivation l5;
  l5.root = l5.add(ProofNode(
      Formula::imp(Formula::box(index, Formula::imp(bs, s)), bs), Rule::Axiom));
  // Chain: [i]f -> [i]([i]s->s) -> [i]s -> [i][i]f
  return build_by_taut(Formula::imp(bf, Formula::box(index, bf)),
                       {&l4, &l5, &l2});
}

}  // namespace glp
