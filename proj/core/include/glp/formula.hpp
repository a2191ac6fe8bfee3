#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace glp {

/// Modal formulas over countably many boxes [0], [1], ..., implication and
/// falsum.  The stored form has exactly four constructors; every other
/// connective (~, T, &, |, <->, <i>) is expanded at construction time.
///
/// Formulas are immutable interned values: copies are pointer copies and
/// operator== is structural equality.  Safe for concurrent use.
class Formula {
public:
  enum class Kind : std::uint8_t { Bot, Var, Box, Imp };

  static Formula bot();
  static Formula var(std::string_view name);
  static Formula imp(Formula lhs, Formula rhs);
  static Formula box(std::size_t index, Formula body);

  // Derived connectives, expanded eagerly.
  static Formula top();                                // F -> F
  static Formula neg(Formula a);                       // a -> F
  static Formula conj(Formula a, Formula b);           // ~(a -> ~b)
  static Formula disj(Formula a, Formula b);           // ~a -> b
  static Formula iff(Formula a, Formula b);            // (a->b) & (b->a)
  static Formula diamond(std::size_t index, Formula a);// ~[i]~a

  Kind kind() const;
  bool is(Kind k) const { return kind() == k; }

  const std::string& var_name() const;  // Kind::Var only
  std::size_t box_index() const;        // Kind::Box only
  Formula box_body() const;             // Kind::Box only
  Formula left() const;                 // Kind::Imp only
  Formula right() const;                // Kind::Imp only

  std::size_t hash() const;
  bool operator==(const Formula& o) const { return node_ == o.node_; }
  bool operator!=(const Formula& o) const { return node_ != o.node_; }

  /// Structural total order (independent of interning history):
  /// Bot < Var < Box < Imp; Var by name; Box by (index, body); Imp by
  /// (left, right).  Used wherever a canonical enumeration order is needed.
  static int compare(const Formula& a, const Formula& b);
  bool operator<(const Formula& o) const { return compare(*this, o) < 0; }

  /// Canonical text; see parse_formula for the grammar.  Implications are
  /// always parenthesized, box binds tighter than ->.
  std::string str() const;

  /// Largest box index occurring in the formula, or -1 if none.
  int max_box_index() const;

  struct Node;
  const Node* raw() const { return node_; }

private:
  explicit Formula(const Node* n) : node_(n) {}
  const Node* node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};
struct FormulaLess {
  bool operator()(const Formula& a, const Formula& b) const { return a < b; }
};

/// Thrown by parse_formula; position is a 0-based byte offset into the input.
struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"),
        position(pos) {}
  std::size_t position;
};

/// ASCII grammar:
///   fml   := 'F' | 'T' | ident | '~' fml | '[' nat ']' fml | '<' nat '>' fml
///          | '(' fml (('->'|'&'|'|'|'<->') fml)? ')'
///   ident := [a-z][a-zA-Z0-9_]*
/// The outermost parentheses of a binary formula may be omitted.
/// All sugar is expanded; the result uses only F, variables, -> and boxes.
Formula parse_formula(std::string_view text);

inline std::string to_string(const Formula& f) { return f.str(); }

/// Finite duplicate-free set of formulas, kept sorted in the structural
/// order so that iteration is canonical.
class FormulaSet {
public:
  FormulaSet() = default;
  explicit FormulaSet(std::vector<Formula> items);

  void insert(Formula f);
  bool contains(const Formula& f) const;
  bool includes(const FormulaSet& other) const;  // superset test
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }

  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }
  const std::vector<Formula>& items() const { return items_; }

  bool operator==(const FormulaSet& o) const { return items_ == o.items_; }

  static FormulaSet union_of(const FormulaSet& a, const FormulaSet& b);
  std::string str() const;  // "{f1, f2, ...}"

private:
  std::vector<Formula> items_;
};

/// Maximal subformulas that are variables or boxed formulas.  Treating them
/// as propositional atoms, the input is a pure Boolean combination of them.
FormulaSet modal_atoms(const Formula& f);

/// Right-nested conjunction of a list; the empty conjunction is T = (F -> F).
Formula fold_conj(const std::vector<Formula>& items);

}  // namespace glp
