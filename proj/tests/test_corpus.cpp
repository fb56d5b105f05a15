#include <doctest.h>

#include "stepcrn/corpus.hpp"

using namespace stepcrn;

TEST_CASE("generation is deterministic by seed") {
  CorpusSpec s;
  s.seed = 7;
  s.count = 10;
  const auto a = generate_corpus(s);
  const auto b = generate_corpus(s);
  REQUIRE(a.size() == 10);
  for (std::size_t k = 0; k < a.size(); ++k)
    CHECK(to_netlist(a[k]) == to_netlist(b[k]));
  s.seed = 8;
  CHECK(to_netlist(generate_corpus(s)[0]) != to_netlist(a[0]));
}

TEST_CASE("maj fraction 1 gives only MAJ gates") {
  CorpusSpec s;
  s.maj_fraction = 1.0;
  s.count = 10;
  for (const Circuit& c : generate_corpus(s))
    for (const Gate& g : c.gates())
      CHECK((is_source(g.kind) || g.kind == GateKind::Maj));
}

TEST_CASE("stats land inside the requested ranges") {
  CorpusSpec s;
  s.fan_out = {1, 3};
  s.depth = {4, 4};
  s.gates = {4, 15};
  s.fan_in = {1, 3};
  s.count = 20;
  s.seed = 2;
  for (const Circuit& c : generate_corpus(s)) {
    const CircuitStats st = stats(c);
    CHECK(st.depth == 4);
    CHECK(st.fan_out >= 1);
    CHECK(st.fan_out <= 3);
    CHECK(st.gates >= 4);
    CHECK(st.gates <= 15);
  }
}

TEST_CASE("formula mode yields formulas") {
  for (const Circuit& c : generate_corpus(formula_suite_spec())) {
    CHECK(c.is_formula());
    CHECK(c.outputs().size() == 1);
  }
}

TEST_CASE("contradictory ranges are rejected") {
  CorpusSpec s;
  s.depth = {4, 2};
  CHECK_THROWS_AS(generate_corpus(s), ValidationError);
  s = CorpusSpec{};
  s.gates = {1, 2};
  s.depth = {5, 5};
  CHECK_THROWS_AS(generate_corpus(s), ValidationError);
  s = CorpusSpec{};
  s.maj_fraction = 1.5;
  CHECK_THROWS_AS(generate_corpus(s), ValidationError);
}
