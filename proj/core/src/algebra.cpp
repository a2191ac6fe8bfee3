#include "glp/algebra.hpp"

#include <algorithm>
#include <numeric>

namespace glp {

FiniteGLPAlgebra::FiniteGLPAlgebra(std::vector<std::string> atom_names,
                                   std::vector<BoxTable> tables,
                                   std::size_t max_atoms)
    : atoms(std::move(atom_names)), boxes(std::move(tables)) {
  if (atoms.size() > max_atoms)
    throw AlgebraError("carrier bound exceeded: " +
                       std::to_string(atoms.size()) + " atoms, limit " +
                       std::to_string(max_atoms));
  for (const auto& t : boxes)
    if (t.size() != carrier_size())
      throw AlgebraError("box table size does not match the carrier");
}

AlgebraReport check_magari(std::size_t atom_count, const BoxTable& table) {
  const Elem one = static_cast<Elem>((std::size_t{1} << atom_count) - 1);
  const std::size_t n = std::size_t{1} << atom_count;
  if (table.size() != n)
    return AlgebraReport{"box table size does not match the carrier"};
  if (table[one] != one)
    return AlgebraReport{"box 1 = " + std::to_string(table[one]) +
                         ", expected 1"};
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x; y < n; ++y)
      if (table[x & y] != (table[x] & table[y]))
        return AlgebraReport{"box(x & y) != box x & box y at x=" +
                             std::to_string(x) + " y=" + std::to_string(y)};
  for (std::size_t x = 0; x < n; ++x) {
    Elem lhs = table[(~table[x] & one) | static_cast<Elem>(x)];
    if (lhs != table[x])
      return AlgebraReport{"box(box x -> x) != box x at x=" +
                           std::to_string(x)};
  }
  return {};
}

AlgebraReport check_glp(const FiniteGLPAlgebra& a) {
  for (std::size_t i = 0; i < a.level_count(); ++i) {
    AlgebraReport r = check_magari(a.atom_count(), a.boxes[i]);
    if (!r.ok())
      return AlgebraReport{"level " + std::to_string(i) + ": " + *r.violation};
  }
  for (std::size_t i = 0; i + 1 < a.level_count(); ++i) {
    for (std::size_t x = 0; x < a.carrier_size(); ++x) {
      Elem e = static_cast<Elem>(x);
      Elem dia = a.diamond(i, e);
      if (!a.leq(dia, a.box(i + 1, dia)))
        return AlgebraReport{"<" + std::to_string(i) + ">a <= [" +
                             std::to_string(i + 1) + "]<" + std::to_string(i) +
                             ">a fails at a=" + std::to_string(x)};
      if (!a.leq(a.box(i, e), a.box(i + 1, e)))
        return AlgebraReport{"[" + std::to_string(i) + "]a <= [" +
                             std::to_string(i + 1) +
                             "]a fails at a=" + std::to_string(x)};
    }
  }
  return {};
}

namespace {

// Predecessor lists of b < a iff box b <= a, over carrier \ {1}.
Digraph box_order(const FiniteGLPAlgebra& a, std::size_t level) {
  const std::size_t n = a.carrier_size();
  Digraph g(n);
  for (std::size_t below = 0; below + 1 < n; ++below)
    for (std::size_t above = 0; above + 1 < n; ++above)
      if (a.leq(a.box(level, static_cast<Elem>(below)),
                static_cast<Elem>(above)))
        g[above].push_back(below);
  return g;
}

std::optional<std::vector<std::size_t>> try_wf_height(const Digraph& g) {
  // Kahn peeling by predecessor counts.
  std::vector<std::size_t> h(g.size(), 0);
  std::vector<std::size_t> remaining(g.size(), 0);
  std::vector<std::vector<std::size_t>> succs(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    remaining[v] = g[v].size();
    for (std::size_t u : g[v]) succs[u].push_back(v);
  }
  std::vector<std::size_t> queue;
  for (std::size_t v = 0; v < g.size(); ++v)
    if (remaining[v] == 0) queue.push_back(v);
  std::size_t done = 0;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    std::size_t u = queue[i];
    ++done;
    for (std::size_t v : succs[u]) {
      h[v] = std::max(h[v], h[u] + 1);
      if (--remaining[v] == 0) queue.push_back(v);
    }
  }
  if (done != g.size()) return std::nullopt;
  return h;
}

}  // namespace

bool is_box_founded(const FiniteGLPAlgebra& a, std::size_t level) {
  return try_wf_height(box_order(a, level)).has_value();
}

HeightTable heights(const FiniteGLPAlgebra& a, std::size_t level) {
  auto h = try_wf_height(box_order(a, level));
  if (!h)
    throw AlgebraError("heights: level " + std::to_string(level) +
                       " is not box-founded");
  HeightTable table(a.carrier_size());
  for (std::size_t x = 0; x < a.carrier_size(); ++x)
    table[x] = Height::fin((*h)[x]);
  table[a.one()] = Height::inf();
  return table;
}

std::vector<std::size_t> wf_height(const Digraph& g) {
  auto h = try_wf_height(g);
  if (!h) throw AlgebraError("wf_height: digraph has a cycle");
  return *h;
}

Digraph product_wf(const Digraph& g1, const Digraph& g2) {
  Digraph out(g1.size() * g2.size());
  for (std::size_t v1 = 0; v1 < g1.size(); ++v1)
    for (std::size_t v2 = 0; v2 < g2.size(); ++v2)
      for (std::size_t u1 : g1[v1])
        for (std::size_t u2 : g2[v2])
          out[v1 * g2.size() + v2].push_back(u1 * g2.size() + u2);
  return out;
}

std::vector<Elem> Filter::elements() const {
  std::vector<Elem> out;
  for (std::size_t x = 0; x < member.size(); ++x)
    if (member[x]) out.push_back(static_cast<Elem>(x));
  return out;
}

Elem Filter::min_element(const FiniteGLPAlgebra& a) const {
  Elem acc = a.one();
  for (std::size_t x = 0; x < member.size(); ++x)
    if (member[x]) acc &= static_cast<Elem>(x);
  return acc;
}

Filter generated_filter(const FiniteGLPAlgebra& a,
                        const std::vector<Elem>& s) {
  Elem meet = a.one();
  for (Elem e : s) meet &= e;
  Filter f;
  f.member.assign(a.carrier_size(), 0);
  for (std::size_t x = 0; x < a.carrier_size(); ++x)
    if (a.leq(meet, static_cast<Elem>(x))) f.member[x] = 1;
  return f;
}

Filter m_gamma(const FiniteGLPAlgebra& a, std::size_t level,
               std::size_t gamma) {
  HeightTable h = heights(a, level);
  Filter f;
  f.member.assign(a.carrier_size(), 0);
  for (std::size_t x = 0; x < a.carrier_size(); ++x)
    if (Height::fin(gamma) <= h[x]) f.member[x] = 1;
  return f;
}

bool is_filter(const FiniteGLPAlgebra& a, const Filter& f) {
  if (f.member.size() != a.carrier_size()) return false;
  if (!f.contains(a.one())) return false;
  std::vector<Elem> elems = f.elements();
  for (Elem x : elems) {
    for (Elem y : elems)
      if (!f.contains(x & y)) return false;
    for (std::size_t up = 0; up < a.carrier_size(); ++up)
      if (a.leq(x, static_cast<Elem>(up)) && !f.contains(static_cast<Elem>(up)))
        return false;
  }
  return true;
}

bool is_open_filter(const FiniteGLPAlgebra& a, const Filter& f) {
  if (!is_filter(a, f)) return false;
  for (Elem x : f.elements())
    for (std::size_t i = 0; i < a.level_count(); ++i)
      if (!f.contains(a.box(i, x))) return false;
  return true;
}

QuotientResult quotient(const FiniteGLPAlgebra& a, const Filter& f) {
  if (!is_open_filter(a, f))
    throw AlgebraError("quotient: not an open filter");
  const Elem m = f.min_element(a);
  // New atoms are the atoms of m, in order.
  std::vector<std::size_t> kept_bits;
  std::vector<std::string> new_atoms;
  for (std::size_t i = 0; i < a.atom_count(); ++i)
    if (m & (Elem{1} << i)) {
      kept_bits.push_back(i);
      new_atoms.push_back(a.atoms[i]);
    }
  auto compress = [&](Elem x) {
    Elem out = 0;
    for (std::size_t k = 0; k < kept_bits.size(); ++k)
      if (x & (Elem{1} << kept_bits[k])) out |= Elem{1} << k;
    return out;
  };
  auto decompress = [&](Elem x) {
    Elem out = 0;
    for (std::size_t k = 0; k < kept_bits.size(); ++k)
      if (x & (Elem{1} << k)) out |= Elem{1} << kept_bits[k];
    return out;
  };

  const std::size_t new_size = std::size_t{1} << kept_bits.size();
  std::vector<BoxTable> new_boxes(a.level_count());
  for (std::size_t i = 0; i < a.level_count(); ++i) {
    new_boxes[i].resize(new_size);
    for (std::size_t x = 0; x < new_size; ++x)
      new_boxes[i][x] = compress(a.box(i, decompress(static_cast<Elem>(x))));
    // Well-definedness: the image may not depend on the representative.
    for (std::size_t x = 0; x < a.carrier_size(); ++x) {
      Elem via_rep = new_boxes[i][compress(static_cast<Elem>(x) & m)];
      Elem direct = compress(a.box(i, static_cast<Elem>(x)));
      if (via_rep != direct)
        throw AlgebraError("quotient: box not well-defined on classes");
    }
  }
  QuotientResult result;
  result.algebra = FiniteGLPAlgebra(std::move(new_atoms), std::move(new_boxes),
                                    a.atom_count());
  result.map.resize(a.carrier_size());
  for (std::size_t x = 0; x < a.carrier_size(); ++x)
    result.map[x] = compress(static_cast<Elem>(x) & m);
  return result;
}

Elem evaluate(const FiniteGLPAlgebra& a, const Valuation& v,
              const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Bot:
      return a.zero();
    case Formula::Kind::Var: {
      auto it = v.find(f.var_name());
      if (it == v.end())
        throw AlgebraError("evaluate: unbound variable " + f.var_name());
      return static_cast<Elem>(it->second & a.one());
    }
    case Formula::Kind::Imp:
      return a.imp(evaluate(a, v, f.left()), evaluate(a, v, f.right()));
    case Formula::Kind::Box:
      return a.box(f.box_index(), evaluate(a, v, f.box_body()));
  }
  return a.zero();
}

bool alg_consequence_check(const FiniteGLPAlgebra& a, const Valuation& v,
                           const FormulaSet& sigma, const FormulaSet& gamma,
                           const Formula& phi, ConsequenceMode mode) {
  if (!is_box_founded(a, 0))
    throw AlgebraError("alg_consequence_check: algebra is not box-founded");
  if (mode == ConsequenceMode::Global) {
    for (const auto& g : gamma)
      if (evaluate(a, v, g) != a.one()) return true;
    return evaluate(a, v, phi) == a.one();
  }
  if (mode == ConsequenceMode::Glocal) {
    for (const auto& s : sigma)
      if (a.box(0, evaluate(a, v, s)) != a.one()) return true;
  }
  Elem meet = a.one();
  for (const auto& g : gamma) meet &= evaluate(a, v, g);
  return a.leq(meet, evaluate(a, v, phi));
}

std::vector<std::vector<Elem>> enumerate_strict_orders(std::size_t n) {
  std::vector<std::vector<Elem>> out;
  const std::size_t pairs = n * n;
  if (n == 0) {
    out.push_back({});
    return out;
  }
  std::vector<Elem> rel(n, 0);
  const std::size_t total = std::size_t{1} << pairs;
  for (std::size_t code = 0; code < total; ++code) {
    bool ok = true;
    for (std::size_t w = 0; w < n && ok; ++w) {
      rel[w] = static_cast<Elem>((code >> (w * n)) & ((1u << n) - 1));
      if (rel[w] & (Elem{1} << w)) ok = false;  // irreflexive
    }
    if (!ok) continue;
    for (std::size_t w = 0; w < n && ok; ++w)
      for (std::size_t u = 0; u < n && ok; ++u)
        if (rel[w] & (Elem{1} << u))
          if ((rel[u] & ~rel[w]) != 0) ok = false;  // transitivity
    if (ok) out.push_back(rel);
  }
  return out;
}

BoxTable kripke_box_table(std::size_t n, const std::vector<Elem>& rel) {
  const std::size_t size = std::size_t{1} << n;
  BoxTable table(size);
  for (std::size_t v = 0; v < size; ++v) {
    Elem boxed = 0;
    for (std::size_t w = 0; w < n; ++w)
      if ((rel[w] & ~static_cast<Elem>(v)) == 0) boxed |= Elem{1} << w;
    table[v] = boxed;
  }
  return table;
}

}  // namespace glp
