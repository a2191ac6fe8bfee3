#include "glp/topology.hpp"

#include <algorithm>
#include <cstdlib>

namespace glp {

bool FiniteTopology::is_open(Mask v) const {
  return std::binary_search(opens.begin(), opens.end(), v);
}

bool FiniteTopology::well_formed() const {
  if (!std::is_sorted(opens.begin(), opens.end())) return false;
  if (std::adjacent_find(opens.begin(), opens.end()) != opens.end())
    return false;
  if (!is_open(0) || !is_open(full())) return false;
  for (Mask a : opens) {
    if ((a & ~full()) != 0) return false;
    for (Mask b : opens)
      if (!is_open(a | b) || !is_open(a & b)) return false;
  }
  return true;
}

FiniteTopology FiniteTopology::discrete(std::size_t points) {
  FiniteTopology t;
  t.points = points;
  const std::size_t size = std::size_t{1} << points;
  t.opens.resize(size);
  for (std::size_t v = 0; v < size; ++v) t.opens[v] = static_cast<Mask>(v);
  return t;
}

FiniteTopology FiniteTopology::from_family(std::size_t points,
                                           std::vector<Mask> family) {
  FiniteTopology t;
  t.points = points;
  std::sort(family.begin(), family.end());
  family.erase(std::unique(family.begin(), family.end()), family.end());
  t.opens = std::move(family);
  if (!t.well_formed())
    throw TopologyError("from_family: not a topology");
  return t;
}

Mask d_op(const FiniteTopology& t, Mask v) {
  if ((v & ~t.full()) != 0)
    throw TopologyError("d_op: argument is not a subset of the carrier");
  Mask out = 0;
  for (std::size_t x = 0; x < t.points; ++x) {
    Mask px = Mask{1} << x;
    bool limit = true;
    for (Mask u : t.opens) {
      if (!(u & px)) continue;
      if ((u & v & ~px) == 0) {
        limit = false;
        break;
      }
    }
    if (limit) out |= px;
  }
  return out;
}

Mask cd_op(const FiniteTopology& t, Mask v) {
  if ((v & ~t.full()) != 0)
    throw TopologyError("cd_op: argument is not a subset of the carrier");
  return static_cast<Mask>(~d_op(t, static_cast<Mask>(~v & t.full())) &
                           t.full());
}

namespace {
// Isolated points of the subspace s: x with an open u such that u & s = {x}.
Mask isolated_points(const FiniteTopology& t, Mask s) {
  Mask out = 0;
  for (std::size_t x = 0; x < t.points; ++x) {
    Mask px = Mask{1} << x;
    if (!(s & px)) continue;
    for (Mask u : t.opens)
      if ((u & s) == px) {
        out |= px;
        break;
      }
  }
  return out;
}
}  // namespace

bool is_scattered(const FiniteTopology& t) {
  Mask s = t.full();
  while (s) {
    Mask iso = isolated_points(t, s);
    if (!iso) return false;
    s = static_cast<Mask>(s & ~iso);
  }
  return true;
}

std::vector<std::optional<std::size_t>> cb_rank(const FiniteTopology& t) {
  std::vector<std::optional<std::size_t>> rank(t.points);
  Mask s = t.full();
  std::size_t level = 0;
  while (s) {
    Mask iso = isolated_points(t, s);
    if (!iso) break;
    for (std::size_t x = 0; x < t.points; ++x)
      if (iso & (Mask{1} << x)) rank[x] = level;
    s = static_cast<Mask>(s & ~iso);
    ++level;
  }
  return rank;
}

bool is_Td(const FiniteTopology& t) {
  for (std::size_t x = 0; x < t.points; ++x) {
    Mask px = Mask{1} << x;
    bool found = false;
    for (Mask u : t.opens) {
      if (!(u & px)) continue;
      // {x} closed in the subspace u: u \ {x} open in u.
      for (Mask w : t.opens)
        if ((w & u) == (u & ~px)) {
          found = true;
          break;
        }
      if (found) break;
    }
    if (!found) return false;
  }
  return true;
}

const FiniteTopology& FiniteGLPSpace::level(std::size_t i) const {
  return topologies.at(i);
}

Mask FiniteGLPSpace::cd(std::size_t i, Mask v) const {
  if (i < topologies.size()) return cd_op(topologies[i], v);
  return full();  // cd of the discrete topology is constant full
}

SpaceReport check_glp_space(const FiniteGLPSpace& s) {
  const std::size_t size = std::size_t{1} << s.points;
  for (std::size_t i = 0; i < s.topologies.size(); ++i) {
    const FiniteTopology& t = s.topologies[i];
    if (t.points != s.points)
      return SpaceReport{"level " + std::to_string(i) +
                         ": carrier size mismatch"};
    if (!t.well_formed())
      return SpaceReport{"level " + std::to_string(i) + ": not a topology"};
    if (!is_scattered(t))
      return SpaceReport{"level " + std::to_string(i) + ": not scattered"};
  }
  for (std::size_t i = 0; i < s.topologies.size(); ++i) {
    const bool last = i + 1 == s.topologies.size();
    // tau_{i+1} is discrete beyond the last explicit level, where both
    // conditions hold trivially.
    if (last) break;
    const FiniteTopology& lo = s.topologies[i];
    const FiniteTopology& hi = s.topologies[i + 1];
    for (Mask u : lo.opens)
      if (!hi.is_open(u))
        return SpaceReport{"tau_" + std::to_string(i) +
                           " not contained in tau_" + std::to_string(i + 1) +
                           " at open " + std::to_string(u)};
    for (std::size_t v = 0; v < size; ++v)
      if (!hi.is_open(d_op(lo, static_cast<Mask>(v))))
        return SpaceReport{"d_tau" + std::to_string(i) + "(V) not open in tau_" +
                           std::to_string(i + 1) + " at V=" +
                           std::to_string(v)};
  }
  return {};
}

std::vector<BoxTable> space_to_frame(const FiniteGLPSpace& s) {
  const std::size_t size = std::size_t{1} << s.points;
  std::vector<BoxTable> boxes(s.topologies.size());
  for (std::size_t i = 0; i < s.topologies.size(); ++i) {
    boxes[i].resize(size);
    for (std::size_t v = 0; v < size; ++v)
      boxes[i][v] = s.cd(i, static_cast<Mask>(v));
  }
  return boxes;
}

FiniteGLPSpace frame_to_space(std::size_t points,
                              const std::vector<BoxTable>& boxes) {
  std::vector<std::string> names(points);
  for (std::size_t i = 0; i < points; ++i) names[i] = "x" + std::to_string(i);
  FiniteGLPAlgebra alg(names, boxes, std::max(points, kDefaultMaxAtoms));
  AlgebraReport glp = check_glp(alg);
  if (!glp.ok())
    throw TopologyError("frame_to_space: tables are not a GLP-frame: " +
                        glp.str());
  FiniteGLPSpace s;
  s.points = points;
  const std::size_t size = std::size_t{1} << points;
  for (const BoxTable& box : boxes) {
    std::vector<Mask> family;
    for (std::size_t v = 0; v < size; ++v)
      if ((static_cast<Mask>(v) & box[v]) == static_cast<Mask>(v))
        family.push_back(static_cast<Mask>(v));  // V open iff V <= box V
    s.topologies.push_back(FiniteTopology::from_family(points, family));
  }
  // Uniqueness direction: the co-derived operator of the recovered
  // topology must reproduce the box.
  for (std::size_t i = 0; i < boxes.size(); ++i)
    for (std::size_t v = 0; v < size; ++v)
      if (s.cd(i, static_cast<Mask>(v)) != boxes[i][v])
        throw TopologyError(
            "frame_to_space: recovered topology fails to reproduce box " +
            std::to_string(i) + " at V=" + std::to_string(v));
  return s;
}

FiniteGLPSpace open_subframe(const FiniteGLPSpace& s, Mask sub) {
  if ((sub & ~s.full()) != 0)
    throw TopologyError("open_subframe: not a subset of the carrier");
  if ((sub & s.cd(0, sub)) != sub)
    throw TopologyError("open_subframe: subset is not 0-open");
  std::vector<std::size_t> kept;
  for (std::size_t x = 0; x < s.points; ++x)
    if (sub & (Mask{1} << x)) kept.push_back(x);
  auto compress = [&](Mask v) {
    Mask out = 0;
    for (std::size_t k = 0; k < kept.size(); ++k)
      if (v & (Mask{1} << kept[k])) out |= Mask{1} << k;
    return out;
  };
  auto decompress = [&](Mask v) {
    Mask out = 0;
    for (std::size_t k = 0; k < kept.size(); ++k)
      if (v & (Mask{1} << k)) out |= Mask{1} << kept[k];
    return out;
  };
  const std::size_t new_size = std::size_t{1} << kept.size();
  std::vector<BoxTable> boxes(s.topologies.size());
  for (std::size_t i = 0; i < s.topologies.size(); ++i) {
    boxes[i].resize(new_size);
    for (std::size_t v = 0; v < new_size; ++v)
      boxes[i][v] =
          compress(static_cast<Mask>(s.cd(i, decompress(static_cast<Mask>(v))) & sub));
  }
  return frame_to_space(kept.size(), boxes);
}

TopoModel restrict_model(const TopoModel& m, Mask sub) {
  TopoModel out;
  out.space = open_subframe(m.space, sub);
  std::vector<std::size_t> kept;
  for (std::size_t x = 0; x < m.space.points; ++x)
    if (sub & (Mask{1} << x)) kept.push_back(x);
  for (const auto& [var, val] : m.valuation) {
    Mask v = 0;
    for (std::size_t k = 0; k < kept.size(); ++k)
      if (val & (Mask{1} << kept[k])) v |= Mask{1} << k;
    out.valuation[var] = v;
  }
  return out;
}

Mask eval_model(const TopoModel& m, const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Bot:
      return 0;
    case Formula::Kind::Var: {
      auto it = m.valuation.find(f.var_name());
      if (it == m.valuation.end())
        throw TopologyError("eval_model: unbound variable " + f.var_name());
      return static_cast<Mask>(it->second & m.space.full());
    }
    case Formula::Kind::Imp: {
      Mask a = eval_model(m, f.left());
      Mask b = eval_model(m, f.right());
      return static_cast<Mask>((~a & m.space.full()) | b);
    }
    case Formula::Kind::Box:
      return m.space.cd(f.box_index(), eval_model(m, f.box_body()));
  }
  return 0;
}

bool sem_consequence_check(const TopoModel& m, std::size_t world,
                           const FormulaSet& sigma, const FormulaSet& gamma,
                           const Formula& phi, ConsequenceMode mode,
                           std::optional<Mask> zero_nbhd) {
  const Mask full = m.space.full();
  if (mode == ConsequenceMode::Global) {
    for (const auto& g : gamma)
      if (eval_model(m, g) != full) return true;
    return eval_model(m, phi) == full;
  }
  const Mask px = Mask{1} << world;
  if ((px & full) == 0)
    throw TopologyError("sem_consequence_check: world out of range");
  for (const auto& g : gamma)
    if (!(eval_model(m, g) & px)) return true;
  if (mode == ConsequenceMode::Glocal) {
    Mask others = static_cast<Mask>(full & ~px);
    if (zero_nbhd) {
      Mask u = *zero_nbhd;
      if ((u & px) == 0 || (u & m.space.cd(0, u)) != u)
        throw TopologyError(
            "sem_consequence_check: not a 0-neighbourhood of the world");
      others = static_cast<Mask>(u & ~px);
    }
    for (const auto& s : sigma)
      if ((eval_model(m, s) & others) != others) return true;
  }
  return (eval_model(m, phi) & px) != 0;
}

std::vector<FiniteTopology> enumerate_topologies(std::size_t n) {
  std::vector<FiniteTopology> out;
  const std::size_t size = std::size_t{1} << n;
  const Mask full = static_cast<Mask>(size - 1);
  if (n == 0) {
    FiniteTopology t;
    t.points = 0;
    t.opens = {0};
    out.push_back(t);
    return out;
  }
  // Choose which of the 2^n - 2 proper nonempty subsets are open; the
  // subset-mask iteration order makes the family list canonical.
  const std::size_t proper = size - 2;
  for (std::size_t code = 0; code < (std::size_t{1} << proper); ++code) {
    std::vector<Mask> family{0, full};
    for (std::size_t k = 0; k < proper; ++k)
      if (code & (std::size_t{1} << k)) family.push_back(static_cast<Mask>(k + 1));
    FiniteTopology t;
    t.points = n;
    std::sort(family.begin(), family.end());
    t.opens = std::move(family);
    if (t.well_formed()) out.push_back(t);
  }
  return out;
}

std::vector<FiniteGLPSpace> enumerate_glp_spaces(std::size_t n,
                                                 std::size_t levels) {
  std::vector<FiniteTopology> scattered;
  for (const auto& t : enumerate_topologies(n))
    if (is_scattered(t)) scattered.push_back(t);

  std::vector<FiniteGLPSpace> out;
  const std::size_t size = std::size_t{1} << n;
  std::vector<std::size_t> choice;
  auto compatible = [&](const FiniteTopology& lo, const FiniteTopology& hi) {
    for (Mask u : lo.opens)
      if (!hi.is_open(u)) return false;
    for (std::size_t v = 0; v < size; ++v)
      if (!hi.is_open(d_op(lo, static_cast<Mask>(v)))) return false;
    return true;
  };
  auto rec = [&](auto&& self, std::size_t depth) -> void {
    if (depth == levels) {
      FiniteGLPSpace s;
      s.points = n;
      for (std::size_t idx : choice) s.topologies.push_back(scattered[idx]);
      out.push_back(std::move(s));
      return;
    }
    for (std::size_t idx = 0; idx < scattered.size(); ++idx) {
      if (!choice.empty() &&
          !compatible(scattered[choice.back()], scattered[idx]))
        continue;
      choice.push_back(idx);
      self(self, depth + 1);
      choice.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

namespace {
std::size_t default_budget() {
  if (const char* env = std::getenv("GLPK_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 50'000'000;
}

void collect_vars(const Formula& f, std::vector<std::string>& out) {
  switch (f.kind()) {
    case Formula::Kind::Bot:
      return;
    case Formula::Kind::Var:
      if (std::find(out.begin(), out.end(), f.var_name()) == out.end())
        out.push_back(f.var_name());
      return;
    case Formula::Kind::Imp:
      collect_vars(f.left(), out);
      collect_vars(f.right(), out);
      return;
    case Formula::Kind::Box:
      collect_vars(f.box_body(), out);
      return;
  }
}
}  // namespace

std::optional<Counterexample> search_countermodel(
    const FormulaSet& sigma, const FormulaSet& gamma, const Formula& phi,
    std::size_t max_points, std::size_t max_levels, ConsequenceMode mode,
    bool with_U, std::size_t budget) {
  if (max_points < 1 || max_levels < 1)
    throw TopologyError("search_countermodel: bounds must be at least 1");
  if (budget == 0) budget = default_budget();

  std::vector<std::string> vars;
  for (const auto& f : sigma) collect_vars(f, vars);
  for (const auto& f : gamma) collect_vars(f, vars);
  collect_vars(phi, vars);
  std::sort(vars.begin(), vars.end());

  std::size_t spent = 0;
  for (std::size_t n = 1; n <= max_points; ++n) {
    const std::size_t size = std::size_t{1} << n;
    for (const FiniteGLPSpace& space : enumerate_glp_spaces(n, max_levels)) {
      // Valuations in lexicographic order over the sorted variable list.
      std::size_t combos = 1;
      for (std::size_t i = 0; i < vars.size(); ++i) combos *= size;
      for (std::size_t code = 0; code < combos; ++code) {
        TopoModel m;
        m.space = space;
        std::size_t rem = code;
        for (const auto& var : vars) {
          m.valuation[var] = static_cast<Mask>(rem % size);
          rem /= size;
        }
        for (std::size_t world = 0; world < n; ++world) {
          if (mode == ConsequenceMode::Glocal && with_U) {
            for (Mask u : space.topologies.empty()
                              ? FiniteTopology::discrete(n).opens
                              : space.topologies[0].opens) {
              if (!(u & (Mask{1} << world))) continue;
              if (++spent > budget)
                throw SearchBudgetError(
                    "search_countermodel: enumeration budget exhausted");
              if (!sem_consequence_check(m, world, sigma, gamma, phi, mode, u))
                return Counterexample{m, world, u};
            }
          } else {
            if (++spent > budget)
              throw SearchBudgetError(
                  "search_countermodel: enumeration budget exhausted");
            if (!sem_consequence_check(m, world, sigma, gamma, phi, mode))
              return Counterexample{m, world, std::nullopt};
          }
          if (mode == ConsequenceMode::Global) break;  // world-independent
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace glp
