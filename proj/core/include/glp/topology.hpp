#pragma once

#include <optional>
#include <string>
#include <vector>

#include "glp/algebra.hpp"
#include "glp/formula.hpp"

namespace glp {

/// Subsets of a finite carrier as bitmasks (bit i = point i).
using Mask = std::uint32_t;

struct TopologyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A topology on {0, ..., points-1}, by its full family of open sets.
struct FiniteTopology {
  std::size_t points = 0;
  std::vector<Mask> opens;  // sorted, duplicate-free

  Mask full() const { return static_cast<Mask>((std::size_t{1} << points) - 1); }
  bool is_open(Mask v) const;
  /// Contains empty and full set, closed under union and intersection.
  bool well_formed() const;

  static FiniteTopology discrete(std::size_t points);
  static FiniteTopology from_family(std::size_t points, std::vector<Mask> family);
};

/// Derived set: x in d(V) iff every open neighbourhood of x meets V \ {x}.
Mask d_op(const FiniteTopology& t, Mask v);
/// Co-derived set: cd(V) = X \ d(X \ V); x in cd(V) iff some punctured
/// neighbourhood of x lies inside V.
Mask cd_op(const FiniteTopology& t, Mask v);

/// Scatteredness via Cantor-Bendixson iteration: repeatedly remove all
/// isolated points of the remaining subspace; scattered iff nothing is left.
bool is_scattered(const FiniteTopology& t);

/// Per-point Cantor-Bendixson rank (iteration at which the point becomes
/// isolated); nullopt for points surviving in the perfect residue.
std::vector<std::optional<std::size_t>> cb_rank(const FiniteTopology& t);

/// Every point is closed in one of its open neighbourhoods.
bool is_Td(const FiniteTopology& t);

/// A finite multitopological space; levels at and beyond topologies.size()
/// are discrete (whose cd is constant full, matching the algebra padding).
struct FiniteGLPSpace {
  std::size_t points = 0;
  std::vector<FiniteTopology> topologies;

  Mask full() const { return static_cast<Mask>((std::size_t{1} << points) - 1); }
  const FiniteTopology& level(std::size_t i) const;  // explicit levels only
  Mask cd(std::size_t i, Mask v) const;              // discrete beyond
  bool operator==(const FiniteGLPSpace& o) const {
    if (points != o.points || topologies.size() != o.topologies.size())
      return false;
    for (std::size_t i = 0; i < topologies.size(); ++i)
      if (topologies[i].opens != o.topologies[i].opens) return false;
    return true;
  }
};

struct SpaceReport {
  std::optional<std::string> violation;
  bool ok() const { return !violation.has_value(); }
  std::string str() const { return ok() ? "ok" : *violation; }
};

/// Verifies, for every explicit level i: tau_i is a well-formed scattered
/// topology, tau_i is contained in tau_{i+1}, and d_{tau_i}(V) is open in
/// tau_{i+1} for all V (checked exhaustively over subsets).
SpaceReport check_glp_space(const FiniteGLPSpace& s);

/// Box tables of the space: box_i = cd_{tau_i} for each explicit level.
std::vector<BoxTable> space_to_frame(const FiniteGLPSpace& s);

/// Recovers the unique topologies with cd_{tau_i} = box_i.  Requires the
/// tables to form a GLP-algebra over the powerset; throws TopologyError when
/// validation or the cd-reproduction check fails.
FiniteGLPSpace frame_to_space(std::size_t points,
                              const std::vector<BoxTable>& boxes);

/// Open subframe on a 0-open subset: box'_i V = X' & box_i V, with points
/// renumbered to 0..|X'|-1 (in increasing point order).  Throws
/// TopologyError when the subset is not 0-open.
FiniteGLPSpace open_subframe(const FiniteGLPSpace& s, Mask sub);

/// A space with a valuation over its powerset algebra.
struct TopoModel {
  FiniteGLPSpace space;
  std::map<std::string, Mask> valuation;
};

TopoModel restrict_model(const TopoModel& m, Mask sub);

/// Truth set of a formula: v extended with v([i]f) = cd_{tau_i}(v(f)).
/// Throws TopologyError on an unbound variable.
Mask eval_model(const TopoModel& m, const Formula& f);

/// Semantic consequence at one pointed model:
///   local:  Gamma true at x implies phi true at x;
///   global: Gamma true everywhere implies phi true everywhere (x ignored);
///   glocal: Gamma at x and Sigma at every y != x imply phi at x; when a
///           0-neighbourhood U of x is supplied, y ranges over U \ {x}.
bool sem_consequence_check(const TopoModel& m, std::size_t world,
                           const FormulaSet& sigma, const FormulaSet& gamma,
                           const Formula& phi, ConsequenceMode mode,
                           std::optional<Mask> zero_nbhd = std::nullopt);

/// All topologies on n labeled points, ordered by the encoded family
/// (lexicographic in the sorted bitmask list).
std::vector<FiniteTopology> enumerate_topologies(std::size_t n);

/// All GLP-spaces on n labeled points with exactly `levels` explicit
/// topologies (each scattered, nested, with the d-image condition).
std::vector<FiniteGLPSpace> enumerate_glp_spaces(std::size_t n,
                                                 std::size_t levels);

struct Counterexample {
  TopoModel model;
  std::size_t world = 0;
  std::optional<Mask> zero_nbhd;
};

struct SearchBudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Enumerates GLP-spaces up to max_points points and max_levels explicit
/// levels, and valuations over the variables of the instance, in canonical
/// order (point count, then topology chain encoding, then valuation, then
/// world).  Returns the first pointed model falsifying the consequence, or
/// nullopt.  For glocal mode with_U additionally searches 0-neighbourhoods.
/// `budget` caps the number of evaluated instances (throws
/// SearchBudgetError when exhausted); 0 means the GLPK_BUDGET environment
/// variable or its default.
std::optional<Counterexample> search_countermodel(
    const FormulaSet& sigma, const FormulaSet& gamma, const Formula& phi,
    std::size_t max_points, std::size_t max_levels,
    ConsequenceMode mode = ConsequenceMode::Glocal, bool with_U = false,
    std::size_t budget = 0);

}  // namespace glp
