#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "glp/formula.hpp"

namespace glp {

/// Elements of a finite powerset algebra, encoded as bitmasks over the atom
/// order (bit i = atom i, little-endian).
using Elem = std::uint32_t;
using BoxTable = std::vector<Elem>;  // indexed by element, size 2^atoms

inline constexpr std::size_t kDefaultMaxAtoms = 10;

struct AlgebraError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Finite GLP-algebra over the powerset of `atoms.size()` atoms, with an
/// explicit box table per level; levels at and beyond boxes.size() are the
/// constant-1 operator, which satisfies every required condition.
struct FiniteGLPAlgebra {
  std::vector<std::string> atoms;
  std::vector<BoxTable> boxes;

  FiniteGLPAlgebra() = default;
  FiniteGLPAlgebra(std::vector<std::string> atom_names,
                   std::vector<BoxTable> tables,
                   std::size_t max_atoms = kDefaultMaxAtoms);

  std::size_t atom_count() const { return atoms.size(); }
  std::size_t carrier_size() const { return std::size_t{1} << atoms.size(); }
  Elem one() const { return static_cast<Elem>(carrier_size() - 1); }
  Elem zero() const { return 0; }
  std::size_t level_count() const { return boxes.size(); }

  Elem box(std::size_t level, Elem a) const {
    return level < boxes.size() ? boxes[level][a] : one();
  }
  Elem diamond(std::size_t level, Elem a) const {
    return static_cast<Elem>(~box(level, static_cast<Elem>(~a & one())) & one());
  }
  Elem imp(Elem a, Elem b) const {
    return static_cast<Elem>((~a & one()) | b);
  }
  bool leq(Elem a, Elem b) const { return (a & b) == a; }
};

/// First violation of one of the three Magari identities, if any.
struct AlgebraReport {
  std::optional<std::string> violation;
  bool ok() const { return !violation.has_value(); }
  std::string str() const { return ok() ? "ok" : *violation; }
};

/// Verifies box 1 = 1, box(x & y) = box x & box y and box(box x -> x) =
/// box x over the whole carrier (pairs for the meet law).
AlgebraReport check_magari(std::size_t atom_count, const BoxTable& table);

/// check_magari per level plus, for consecutive levels, the conditions
/// <i>a <= [i+1]<i>a and [i]a <= [i+1]a.  Padding levels are constant-1 and
/// satisfy everything, so only explicit pairs are checked.
AlgebraReport check_glp(const FiniteGLPAlgebra& a);

/// True iff the relation b < a iff box b <= a is acyclic on carrier \ {1}.
bool is_box_founded(const FiniteGLPAlgebra& a, std::size_t level);

/// Ordinal heights over the relation above; infinite exactly at 1.
struct Height {
  bool infinite = false;
  std::size_t value = 0;

  static Height inf() { return Height{true, 0}; }
  static Height fin(std::size_t v) { return Height{false, v}; }
  Height plus_one() const { return infinite ? *this : fin(value + 1); }
  bool operator==(const Height& o) const {
    return infinite == o.infinite && (infinite || value == o.value);
  }
  bool operator<=(const Height& o) const {
    return o.infinite || (!infinite && value <= o.value);
  }
  friend Height min(const Height& x, const Height& y) {
    return x <= y ? x : y;
  }
  std::string str() const {
    return infinite ? "inf" : std::to_string(value);
  }
};

using HeightTable = std::vector<Height>;  // indexed by element

/// Exact heights; throws AlgebraError when the level is not box-founded.
HeightTable heights(const FiniteGLPAlgebra& a, std::size_t level);

/// Generic well-founded-set utilities over explicit digraphs given as
/// predecessor lists: digraph[v] = list of u with u < v.
using Digraph = std::vector<std::vector<std::size_t>>;

/// Heights of an acyclic digraph; throws AlgebraError on a cycle.
std::vector<std::size_t> wf_height(const Digraph& g);

/// Product relation: (u1, u2) < (v1, v2) iff componentwise.  Node (i, j) of
/// the result is i * g2.size() + j.
Digraph product_wf(const Digraph& g1, const Digraph& g2);

/// Filters of the Boolean reduct, stored by explicit membership.
struct Filter {
  std::vector<char> member;  // indexed by element

  bool contains(Elem a) const { return member[a]; }
  std::vector<Elem> elements() const;
  /// The least element; every filter of a finite powerset algebra is the
  /// up-set of its meet.
  Elem min_element(const FiniteGLPAlgebra& a) const;
};

/// Upward closure of finite meets of S (the filter {1} for empty S).
Filter generated_filter(const FiniteGLPAlgebra& a, const std::vector<Elem>& s);

/// M(gamma) = { x : gamma <= ht(x) }.
Filter m_gamma(const FiniteGLPAlgebra& a, std::size_t level, std::size_t gamma);

bool is_filter(const FiniteGLPAlgebra& a, const Filter& f);
/// Closed under every box operator (explicit levels; padding boxes map into
/// any filter since they are constant 1).
bool is_open_filter(const FiniteGLPAlgebra& a, const Filter& f);

/// Quotient by an open filter together with the canonical epimorphism.
/// Classes are x ~ y iff (x <-> y) in F; for the principal filter with meet
/// m this collapses to x & m == y & m, so the quotient is the powerset
/// algebra over the atoms of m.
struct QuotientResult {
  FiniteGLPAlgebra algebra;
  std::vector<Elem> map;  // old element -> new element
};
QuotientResult quotient(const FiniteGLPAlgebra& a, const Filter& f);

/// Valuations map variables to elements and extend homomorphically.
using Valuation = std::map<std::string, Elem>;

/// Homomorphic evaluation; throws AlgebraError on an unbound variable.
Elem evaluate(const FiniteGLPAlgebra& a, const Valuation& v, const Formula& f);

enum class ConsequenceMode : std::uint8_t { Local, Global, Glocal };

/// Algebraic consequence check at one (algebra, valuation) pair:
///   glocal: if [0]v(s) = 1 for all s in sigma then v(phi) lies in the
///           filter generated by v(gamma);
///   local:  glocal with empty sigma;
///   global: if v(g) = 1 for all g in gamma then v(phi) = 1.
/// Requires box-foundedness at level 0 (throws AlgebraError otherwise).
bool alg_consequence_check(const FiniteGLPAlgebra& a, const Valuation& v,
                           const FormulaSet& sigma, const FormulaSet& gamma,
                           const Formula& phi, ConsequenceMode mode);

/// Strict partial orders (transitive, irreflexive) on n labeled points,
/// as adjacency bitmask rows: rel[w] has bit u set iff w R u.
std::vector<std::vector<Elem>> enumerate_strict_orders(std::size_t n);

/// Kripke box of a transitive converse-well-founded relation:
/// box V = { w : every R-successor of w lies in V }.
BoxTable kripke_box_table(std::size_t n, const std::vector<Elem>& rel);

}  // namespace glp
