#pragma once

#include <optional>
#include <span>
#include <vector>

#include "glp/derivation.hpp"
#include "glp/formula.hpp"

namespace glp {

/// Axiom schemes of the calculus:
///   (i)   substitution instances of classical tautologies
///   (ii)  [i](a -> b) -> ([i]a -> [i]b)
///   (iii) [i]([i]a -> a) -> [i]a
///   (iv)  <i>a -> [i+1]<i>a            (matched in desugared form)
///   (v)   [i]a -> [i+1]a
enum class AxiomKind : std::uint8_t {
  Tautology,
  Distribution,
  Loeb,
  DiamondShift,
  Monotone,
};

std::string_view axiom_kind_name(AxiomKind k);

struct AtomLimitError : std::runtime_error {
  explicit AtomLimitError(std::size_t count, std::size_t limit)
      : std::runtime_error("tautology check over " + std::to_string(count) +
                           " modal atoms exceeds the limit of " +
                           std::to_string(limit)),
        count(count), limit(limit) {}
  std::size_t count, limit;
};

/// Thrown by proof builders on precondition violations.
struct BuildError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultAtomLimit = 20;

/// Truth-table check over modal_atoms(f).  Throws AtomLimitError beyond
/// `atom_limit` atoms.
bool is_tautology(const Formula& f, std::size_t atom_limit = kDefaultAtomLimit);

/// First matching scheme in the order (i)..(v), or nullopt.  Formulas whose
/// atom count exceeds `atom_limit` are never reported as scheme (i).
std::optional<AxiomKind> is_axiom(const Formula& f,
                                  std::size_t atom_limit = kDefaultAtomLimit);

/// Checks a back-link-free derivation over rules ax/asm/mp/nec and classifies
/// each assumption leaf: boxed iff some strict ancestor is a nec node, local
/// otherwise.  Valid iff every node's rule is correct, boxed leaf formulas
/// lie in sigma and local leaf formulas lie in gamma.
Judgment check_hilbert(const Derivation& d, const FormulaSet& sigma,
                       const FormulaSet& gamma);

/// Derives `goal` from the given premise derivations with one tautology
/// axiom c1 -> (c2 -> ... -> goal) and a chain of mp.  Requires the curried
/// implication to be a tautology over modal atoms; the result's assumption
/// leaves are exactly the premises' assumption leaves.
Derivation build_by_taut(const Formula& goal,
                         std::span<const Derivation> premises);
Derivation build_by_taut(const Formula& goal,
                         std::initializer_list<const Derivation*> premises);
Derivation build_by_taut(const Formula& goal,
                         const std::vector<const Derivation*>& premises);

/// From an assumption-free derivation of a -> b, derives [0]a -> [0]b.
/// The nec rule exists for box 0 only, so `index` must be 0.
Derivation build_box_mono(const Derivation& d, std::size_t index);

/// Assumption-free derivation of [i]f -> [i][i]f for any index.
Derivation build_transitivity(const Formula& f, std::size_t index);

namespace detail {

/// Node-local rule validation and sigma/gamma coverage, shared by the
/// hilbert, cyclic and omega checkers.
void check_rules(const Derivation& d, CheckReport& report, bool allow_ref,
                 bool allow_omega);
void check_coverage(const LeafClassification& cls, const FormulaSet& sigma,
                    const FormulaSet& gamma, CheckReport& report);

/// From an assumption-free derivation of a theorem t, derives [i]t: one nec
/// step followed by a chain of scheme-(v) instances.  Sound only because t
/// is proved without assumptions.
Derivation build_nec_theorem(const Derivation& d, std::size_t index);

/// Assumption-free derivation of ([0]c1 & [0]c2 & ... & [0]ck) -> [0]C for a
/// target C that is a tautological consequence of the conjuncts c1..ck (and
/// conversely implies each of them tautologically is not required).  Used to
/// push a box through a conjunction.
Derivation build_box_of_conj(const std::vector<Formula>& conjuncts,
                             const Formula& target);

}  // namespace detail

}  // namespace glp
