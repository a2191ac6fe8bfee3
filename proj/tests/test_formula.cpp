#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "glp/formula.hpp"

using namespace glp;

namespace {
Formula F(const std::string& s) { return parse_formula(s); }

Formula random_formula(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 4 : 1);
  switch (pick(rng)) {
    case 0:
      return Formula::bot();
    case 1: {
      static const char* names[] = {"p", "q", "r", "asdf_1"};
      return Formula::var(names[rng() % 4]);
    }
    case 2:
      return Formula::box(rng() % 3, random_formula(rng, depth - 1));
    default:
      return Formula::imp(random_formula(rng, depth - 1),
                          random_formula(rng, depth - 1));
  }
}
}  // namespace

TEST_CASE("parse desugars the derived connectives") {
  CHECK(F("[0](p -> q) -> ([0]p -> [0]q)") ==
        Formula::imp(Formula::box(0, Formula::imp(Formula::var("p"),
                                                  Formula::var("q"))),
                     Formula::imp(Formula::box(0, Formula::var("p")),
                                  Formula::box(0, Formula::var("q")))));
  // <1>p is ~[1]~p
  CHECK(F("<1>p") ==
        Formula::imp(Formula::box(1, Formula::imp(Formula::var("p"),
                                                  Formula::bot())),
                     Formula::bot()));
  CHECK(F("T") == Formula::imp(Formula::bot(), Formula::bot()));
  CHECK(F("~p") == Formula::imp(Formula::var("p"), Formula::bot()));
  CHECK(F("(p & q)") ==
        Formula::imp(Formula::imp(Formula::var("p"),
                                  Formula::imp(Formula::var("q"),
                                               Formula::bot())),
                     Formula::bot()));
  CHECK(F("(p | q)") ==
        Formula::imp(Formula::imp(Formula::var("p"), Formula::bot()),
                     Formula::var("q")));
  CHECK(F("(p <-> q)") == Formula::iff(Formula::var("p"), Formula::var("q")));
  CHECK(F("p -> q") == F("(p -> q)"));  // outermost parentheses optional
}

TEST_CASE("parse reports positions for malformed input") {
  CHECK_THROWS_AS(F(""), ParseError);
  CHECK_THROWS_AS(F("p ->"), ParseError);
  CHECK_THROWS_AS(F("[x]p"), ParseError);
  CHECK_THROWS_AS(F("[]p"), ParseError);
  CHECK_THROWS_AS(F("(p -> q"), ParseError);
  CHECK_THROWS_AS(F("p q"), ParseError);
  CHECK_THROWS_AS(F("[99999999999999]p"), ParseError);
  try {
    F("p -> [z]q");
  } catch (const ParseError& e) {
    CHECK(e.position == 6);
  }
}

TEST_CASE("render is canonical and round-trips") {
  CHECK(Formula::bot().str() == "F");
  CHECK(Formula::box(2, Formula::var("p")).str() == "[2]p");
  CHECK(Formula::imp(Formula::bot(), Formula::bot()).str() == "(F -> F)");
  CHECK(F("T").str() == "(F -> F)");
  CHECK(F("[0](p->q)").str() == "[0](p -> q)");

  std::mt19937 rng(20250811);
  for (int i = 0; i < 500; ++i) {
    Formula f = random_formula(rng, 5);
    CHECK(parse_formula(f.str()) == f);
  }
}

TEST_CASE("modal atoms are the maximal boxed or variable subformulas") {
  FormulaSet atoms = modal_atoms(F("[0]p -> (q -> [1][0]p)"));
  CHECK(atoms.size() == 3);
  CHECK(atoms.contains(F("[0]p")));
  CHECK(atoms.contains(F("q")));
  CHECK(atoms.contains(F("[1][0]p")));

  CHECK(modal_atoms(Formula::bot()).empty());

  FormulaSet outer = modal_atoms(F("[0]([0]p -> p)"));
  CHECK(outer.size() == 1);
  CHECK(outer.contains(F("[0]([0]p -> p)")));
}

namespace {
bool is_subformula(const Formula& sub, const Formula& f) {
  if (sub == f) return true;
  switch (f.kind()) {
    case Formula::Kind::Imp:
      return is_subformula(sub, f.left()) || is_subformula(sub, f.right());
    case Formula::Kind::Box:
      return is_subformula(sub, f.box_body());
    default:
      return false;
  }
}

// Replaces every modal atom by a fresh variable; the result must be purely
// propositional (no boxes left).
Formula substitute_atoms(const Formula& f, const FormulaSet& atoms) {
  if (atoms.contains(f)) {
    std::size_t idx = 0;
    for (const auto& a : atoms) {
      if (a == f) break;
      ++idx;
    }
    return Formula::var("fresh" + std::to_string(idx));
  }
  if (f.is(Formula::Kind::Imp))
    return Formula::imp(substitute_atoms(f.left(), atoms),
                        substitute_atoms(f.right(), atoms));
  return f;
}

bool box_free(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Box:
      return false;
    case Formula::Kind::Imp:
      return box_free(f.left()) && box_free(f.right());
    default:
      return true;
  }
}
}  // namespace

TEST_CASE("atoms are subformulas and substitution leaves pure Boolean form") {
  std::mt19937 rng(7);
  for (int i = 0; i < 300; ++i) {
    Formula f = random_formula(rng, 5);
    FormulaSet atoms = modal_atoms(f);
    for (const auto& a : atoms) CHECK(is_subformula(a, f));
    CHECK(box_free(substitute_atoms(f, atoms)));
  }
}

TEST_CASE("formula sets are duplicate-free and ordered") {
  FormulaSet s;
  s.insert(F("q"));
  s.insert(F("p"));
  s.insert(F("q"));
  CHECK(s.size() == 2);
  CHECK(s.contains(F("p")));
  CHECK(s.includes(FormulaSet{{F("p")}}));
  CHECK_FALSE(FormulaSet{{F("p")}}.includes(s));
  CHECK(s.str() == "{p, q}");
}

TEST_CASE("fold_conj is right-nested with T for the empty list") {
  CHECK(fold_conj({}) == Formula::top());
  CHECK(fold_conj({F("p")}) == F("p"));
  CHECK(fold_conj({F("p"), F("q"), F("r")}) ==
        Formula::conj(F("p"), Formula::conj(F("q"), F("r"))));
}
