#include <doctest.h>

#include "stepcrn/compiler.hpp"
#include "stepcrn/corpus.hpp"
#include "stepcrn/verify.hpp"
#include "support.hpp"

using namespace stepcrn;

TEST_CASE("input selection") {
  VerifyOptions o;
  const auto all = select_inputs(3, o);
  REQUIRE(all.size() == 8);
  CHECK(all[1] == std::vector<bool>{false, false, true});
  o.mode = InputMode::Random;
  o.random_count = 5;
  CHECK(select_inputs(10, o).size() == 5);
  CHECK(select_inputs(10, o) == select_inputs(10, o));
  o.mode = InputMode::All;
  o.input_cap = 4;
  CHECK_THROWS_AS(select_inputs(5, o), ValidationError);
  CHECK(VerifyOptions::default_seeds().size() == 25);
}

TEST_CASE("serial and parallel verification agree exactly") {
  CorpusSpec spec = circuit_suite_spec();
  spec.count = 8;
  VerifyOptions o;
  o.seeds = {0, 1, 2};
  o.exhaustive = true;
  for (const Circuit& c : generate_corpus(spec))
    for (Backend b : {Backend::Exp, Backend::Catalyst}) {
      const Compilation comp = compile(c, b);
      const VerifySummary s = verify_serial(c, comp, o);
      CHECK(s.ok());
      CHECK(s == verify_parallel(c, comp, o));
    }
}

TEST_CASE("exhaustive AND example has one terminal per input") {
  const Circuit c = oracle::load("and_gate_example.net");
  VerifyOptions o;
  o.exhaustive = true;
  const VerifySummary s = verify_parallel(c, compile_circuit_catalyst(c), o);
  CHECK(s.ok());
  CHECK(s.exhaustive_checked == 8);
  CHECK(s.terminals == 8);
  const VerifySummary f = verify_parallel(c, compile_formula(c), o);
  CHECK(f.ok());
  CHECK(f.exhaustive_checked == 8);
}

TEST_CASE("corrupted rule gives a counterexample") {
  const Circuit c = oracle::load("fig_indexingformula.net");
  Compilation comp = compile_formula(c);
  auto& rules = comp.program.rules;
  const Rule good = parse_rule("y[7]F + x[7]T -> .", comp.program.alphabet);
  const auto it = std::find(rules.begin(), rules.end(), good);
  REQUIRE(it != rules.end());
  *it = parse_rule("y[7]F + x[7]F -> .", comp.program.alphabet);
  VerifyOptions o;
  const VerifySummary s = verify_parallel(c, comp, o);
  CHECK_FALSE(s.ok());
  REQUIRE(s.first.has_value());
  CHECK(s.first->circuit == "indexingformula");
  CHECK(s.first->seed.has_value());
  CHECK_FALSE(s.first->terminal.empty());
  CHECK(to_text(s).find("FAIL") != std::string::npos);
  CHECK(s == verify_serial(c, comp, o));
}

TEST_CASE("exhaustive mode never passes where sampling fails") {
  CorpusSpec spec = formula_suite_spec();
  spec.count = 20;
  VerifyOptions sampled;
  sampled.seeds = {0, 1, 2, 3};
  VerifyOptions full = sampled;
  full.exhaustive = true;
  for (const Circuit& c : generate_corpus(spec)) {
    const Compilation comp = compile_formula(c);
    const VerifySummary e = verify_parallel(c, comp, full);
    const VerifySummary s = verify_parallel(c, comp, sampled);
    if (e.ok())
      CHECK(s.ok());
    CHECK(e.exhaustive_checked + e.exhaustive_skipped == e.inputs);
  }
}

TEST_CASE("summary JSON is well formed") {
  const Circuit c = oracle::load("and_fanout2.net");
  const std::string j = to_json(verify_parallel(c, compile_circuit_exp(c), VerifyOptions{}));
  CHECK(j.find("\"failed\": 0") != std::string::npos);
  CHECK(j.find("\"runs\": 100") != std::string::npos);
}
