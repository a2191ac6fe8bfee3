#include <benchmark/benchmark.h>

#include "glp/cyclic.hpp"
#include "glp/hilbert.hpp"
#include "glp/infinitary.hpp"
#include "glp/topology.hpp"

namespace {

using namespace glp;

Derivation example1(const Formula& phi) {
  Derivation d;
  NodeId root = d.add(ProofNode(phi, Rule::MP));
  NodeId nec = d.add(ProofNode(Formula::box(0, phi), Rule::Nec));
  NodeId ref = d.add(ProofNode(phi, Rule::Ref));
  NodeId leaf =
      d.add(ProofNode(Formula::imp(Formula::box(0, phi), phi), Rule::Assumption));
  d.at(root).children = {nec, leaf};
  d.at(nec).children = {ref};
  d.at(ref).backlink = root;
  d.root = root;
  return d;
}

void BM_Tautology(benchmark::State& state) {
  Formula f = parse_formula(
      "(([0]p & ([0]p -> ([1]q | r))) -> (([1]q | r) | s))");
  for (auto _ : state) benchmark::DoNotOptimize(is_tautology(f));
}
BENCHMARK(BM_Tautology);

void BM_CyclicToHilbert(benchmark::State& state) {
  Derivation d = example1(parse_formula("p"));
  for (auto _ : state) {
    Derivation h = cyclic_to_hilbert(d);
    benchmark::DoNotOptimize(h);
  }
}
BENCHMARK(BM_CyclicToHilbert);

void BM_CheckTranslated(benchmark::State& state) {
  Derivation h = cyclic_to_hilbert(example1(parse_formula("p")));
  for (auto _ : state) {
    Judgment j = check_hilbert(h, {}, {});
    benchmark::DoNotOptimize(j.valid());
  }
}
BENCHMARK(BM_CheckTranslated);

void BM_InfToOmega(benchmark::State& state) {
  RegularInfDerivation r = unravel(example1(parse_formula("p")));
  FormulaSet side{{parse_formula("[0]p -> p")}};
  for (auto _ : state) {
    Derivation om = inf_to_omega(r, side, side);
    benchmark::DoNotOptimize(om);
  }
}
BENCHMARK(BM_InfToOmega);

void BM_EnumerateSpaces3(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(enumerate_glp_spaces(3, 2).size());
}
BENCHMARK(BM_EnumerateSpaces3);

void BM_CountermodelSearch(benchmark::State& state) {
  FormulaSet gamma{{parse_formula("[0]p")}};
  Formula p = parse_formula("p");
  for (auto _ : state)
    benchmark::DoNotOptimize(
        search_countermodel({}, gamma, p, 3, 1, ConsequenceMode::Local));
}
BENCHMARK(BM_CountermodelSearch);

}  // namespace

BENCHMARK_MAIN();
