// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <regex>

#include "stepcrn/compiler.hpp"
#include "stepcrn/corpus.hpp"
#include "stepcrn/engine.hpp"
#include "stepcrn/lowerbound.hpp"
#include "stepcrn/verify.hpp"
#include "support.hpp"

using namespace stepcrn;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int n, bool ok, const std::string& detail) {
  std::printf("criterion %2d: %s  %s\n", n, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok)
    ++failures;
}

Count count_of(const Configuration& c, const Alphabet& a, const std::string& name) {
  return a.contains(name) ? c[a.at(name)] : 0;
}

// Species belonging to gate `g`: y[g]*, y[*->g]*, a[g]*, b[g]*.
bool owned_by(const std::string& name, GateId g) {
  static const std::regex re(R"(^[yab]\[(?:\d+->)?(\d+)\][TF]$)");
  std::smatch m;
  return std::regex_match(name, m, re) && std::stoul(m[1].str()) == g;
}

std::string rule_of_trace(const std::string& line) {
  const auto b = line.find("rule=") + 5;
  return line.substr(b, line.find(" volume=") - b);
}

// ---------------------------------------------------------------------------

void criterion1() {
  const auto t0 = Clock::now();
  const Circuit c = oracle::load("and_gate_example.net");
  const Compilation comp = compile_formula(c);
  const auto& p = comp.program;
  const std::vector<bool> in{true, true, false};
  bool ok = comp.report.step_count == 3 && comp.report.step_roles[1] == "gates 1";
  std::string why;
  for (std::uint64_t seed = 0; seed < 25 && ok; ++seed) {
    const RunResult r = run_program(p, in, seed);
    const Configuration& after_gate = r.per_step_terminal.at(1);
    for (SpeciesId s = 0; s < p.alphabet.size(); ++s) {
      const auto& name = p.alphabet.name(s);
      if (!owned_by(name, 4))
        continue;
      const Count want = name == "y[3->4]F" ? 1 : 0;
      if (after_gate[s] != want) {
        ok = false;
        why = "seed " + std::to_string(seed) + ": " + name + "=" + std::to_string(after_gate[s]);
      }
    }
    ok = ok && r.decoded.ok() && r.decoded.bits == std::vector<bool>{false};
  }
  // Exhaustive: the gate step has a single terminal, and the program a single decode.
  const RunResult r = run_program(p, in, 0);
  Configuration entry = r.per_step_terminal.at(0);
  Configuration additions(p.alphabet.size());
  additions.add(p.steps.at(1));
  for (SpeciesId s = 0; s < p.alphabet.size(); ++s)
    entry[s] += additions[s];
  const TerminalSet gate_terms = enumerate_terminals(entry, p.rules);
  bool single = gate_terms.size() == 1 && count_of(*gate_terms.begin(), p.alphabet, "y[3->4]F") == 1;
  const ProgramTerminals all = enumerate_program_terminals(p, in);
  std::set<std::string> decodes;
  for (const auto& t : all.terminals) {
    const Decoded d = decode_output(t, p);
    decodes.insert(d.ok() ? format_bits(d.bits) : d.error);
  }
  single = single && !all.skipped && decodes == std::set<std::string>{"0"};
  const double secs = since(t0);
  ok = ok && single && secs < 1.0;
  report(1, ok,
         "AND(T,T,F) leaves exactly y[3->4]F; gate-step terminals=" + std::to_string(gate_terms.size()) +
             " decodes=" + std::to_string(decodes.size()) + " time=" + std::to_string(secs) + "s " + why);
}

void criterion2() {
  const auto t0 = Clock::now();
  const Circuit c = oracle::load("and_fanout2.net");
  const Compilation comp = compile_circuit_exp(c);
  const auto& p = comp.program;
  const std::vector<bool> in{true, false}; // gate 3 = 1, gate 2 = 0
  bool ok = comp.report.input_multiplicity == 2 && comp.report.demand.at(1) == 2;
  std::size_t gate_step = 0;
  while (gate_step < comp.report.step_roles.size() && comp.report.step_roles[gate_step] != "gates 1")
    ++gate_step;
  ok = ok && gate_step < comp.report.step_roles.size();
  std::string seen;
  for (std::uint64_t seed = 0; seed < 25 && ok; ++seed) {
    const RunResult r = run_program(p, in, seed);
    const Configuration& t = r.per_step_terminal.at(gate_step);
    const Count n = count_of(t, p.alphabet, "y[2->1]F");
    seen = std::to_string(n);
    for (SpeciesId s = 0; s < p.alphabet.size(); ++s)
      if (owned_by(p.alphabet.name(s), 1) && p.alphabet.name(s) != "y[2->1]F" && t[s] != 0)
        ok = false;
    ok = ok && n == 2 && r.decoded.ok() && r.decoded.bits == oracle::evaluate(c, in);
  }
  const double secs = since(t0);
  ok = ok && secs < 1.0;
  report(2, ok, "fan-out-2 AND on (1,0) under exp leaves y[2->1]F x" + seen + ", input multiplicity " +
                    std::to_string(comp.report.input_multiplicity) + " time=" + std::to_string(secs) + "s");
}

void criterion3() {
  const auto t0 = Clock::now();
  const Circuit c = oracle::load("fig_indexingformula.net");
  const Compilation comp = compile_formula(c);
  const auto& p = comp.program;

  // Frozen from the worked example table.
  const std::vector<std::set<std::string>> table_additions = {
      {"x[1]T", "x[2]T", "x[3]T", "x[4]T", "x[1]F", "x[2]F", "x[3]F", "x[4]F"},
      {"y[5]T", "y[1->5]F", "y[2->5]F", "y[6]T", "y[3->6]F", "y[4->6]F"},
      {"x[5]T", "x[6]T", "x[5]F", "x[6]F"},
      {"y[5->7]T", "y[6->7]T", "y[7]F"},
      {"x[7]T", "x[7]F"},
  };
  // Relevant rules per step on input 1001. Step 4 follows the OR table
  // (the example's cell names the wire species with the wrong polarity).
  const std::vector<std::set<std::string>> table_rules = {
      {"y[1]T + x[1]F", "y[2]F + x[2]T", "y[3]F + x[3]T", "y[4]T + x[4]F"},
      {"x[1]T + y[1->5]F", "x[2]F + y[5]T", "x[3]F + y[6]T", "x[4]T + y[4->6]F"},
      {"y[2->5]F + x[5]T", "y[3->6]F + x[6]T"},
      {"y[5->7]T + x[5]F", "y[6->7]T + x[6]F"},
      {"y[7]F + x[7]T"},
  };

  bool ok = p.step_count() == 5;
  std::string why;
  for (std::size_t k = 0; ok && k < 5; ++k) {
    std::set<std::string> got;
    for (const Term& t : p.steps[k]) {
      got.insert(p.alphabet.name(t.species));
      ok = ok && t.count == 1;
    }
    if (got != table_additions[k]) {
      ok = false;
      why = "step " + std::to_string(k + 1) + " additions differ";
    }
  }
  const std::vector<bool> in{true, false, false, true};
  const auto enc = encode_input(p, in);
  std::set<std::string> initial;
  for (const Term& t : enc)
    initial.insert(p.alphabet.name(t.species));
  ok = ok && initial == std::set<std::string>{"y[1]T", "y[2]F", "y[3]F", "y[4]T"};

  RunOptions opt;
  opt.trace = true;
  for (std::uint64_t seed = 0; seed < 25 && ok; ++seed) {
    const RunResult r = run_program(p, in, seed, opt);
    std::vector<std::set<std::string>> fired(5);
    for (const auto& line : r.trace) {
      const std::size_t step = std::stoul(line.substr(5));
      fired.at(step).insert(rule_of_trace(line));
    }
    for (std::size_t k = 0; k < 5; ++k) {
      std::set<std::string> want;
      for (const auto& text : table_rules[k]) {
        Alphabet scratch = p.alphabet;
        want.insert(parse_rule(text + " -> .", scratch).to_string(p.alphabet));
      }
      if (fired[k] != want) {
        ok = false;
        why = "seed " + std::to_string(seed) + " step " + std::to_string(k + 1) + " fired other rules";
      }
    }
    ok = ok && r.decoded.ok() && r.decoded.bits == std::vector<bool>{false};
  }
  const double secs = since(t0);
  ok = ok && secs < 1.0;
  report(3, ok, "indexing formula: " + std::to_string(p.step_count()) + " steps, additions and fired rules match, 1001 -> 0 time=" +
                    std::to_string(secs) + "s " + why);
}

const std::vector<Circuit>& formula_suite() {
  static const std::vector<Circuit> s = generate_corpus(formula_suite_spec());
  return s;
}

const std::vector<Circuit>& circuit_suite() {
  static const std::vector<Circuit> s = generate_corpus(circuit_suite_spec());
  return s;
}

bool has_maj(const Circuit& c) {
  for (const auto& g : c.gates())
    if (g.kind == GateKind::Maj)
      return true;
  return false;
}

// Summaries kept for the resource criterion.
std::vector<VerifySummary> formula_summaries;
std::vector<VerifySummary> exp_summaries;
std::vector<VerifySummary> catalyst_summaries;

void criterion4() {
  const auto t0 = Clock::now();
  const auto& suite = formula_suite();
  std::size_t maj = 0, runs = 0, bad_shape = 0;
  bool ok = suite.size() == 200;
  std::string first;
  for (const Circuit& c : suite) {
    const CircuitStats s = stats(c);
    if (!(s.formula && s.depth <= 5 && s.gates <= 20 && c.inputs().size() <= 8 && c.outputs().size() == 1))
      ++bad_shape;
    maj += has_maj(c) ? 1 : 0;
    const VerifySummary v = verify_parallel(c, compile_formula(c), VerifyOptions{});
    // Independent oracle on top of the library's own comparison.
    for (std::uint64_t x = 0; x < (1ull << c.inputs().size()); ++x)
      if (oracle::evaluate(c, oracle::bits_of(x, c.inputs().size())) !=
          evaluate(c, oracle::bits_of(x, c.inputs().size())))
        ok = false;
    runs += v.runs;
    if (!v.ok() && first.empty())
      first = c.name() + ": " + to_text(v);
    ok = ok && v.ok() && v.runs == (std::size_t{1} << c.inputs().size()) * 25;
    formula_summaries.push_back(v);
  }
  const double secs = since(t0);
  const bool enough_maj = maj * 10 >= suite.size() * 3;
  ok = ok && bad_shape == 0 && enough_maj;
  char buf[256];
  std::snprintf(buf, sizeof buf, "200 formulas, %zu with MAJ, %zu runs, all agree, %.1fs (target < 60s)%s", maj, runs,
                secs, secs < 60.0 ? "" : " OVER TARGET");
  report(4, ok && secs < 60.0, buf + (first.empty() ? std::string() : " first failure: " + first));
}

void criterion5() {
  const auto t0 = Clock::now();
  const auto& suite = circuit_suite();
  bool ok = suite.size() == 100;
  std::size_t runs = 0, disagreements = 0, bad_shape = 0;
  std::string first;
  for (const Circuit& c : suite) {
    const CircuitStats s = stats(c);
    if (!(s.depth <= 4 && s.fan_out <= 3 && c.inputs().size() <= 6))
      ++bad_shape;
    const Compilation ce = compile_circuit_exp(c);
    const Compilation cc = compile_circuit_catalyst(c);
    const VerifySummary ve = verify_parallel(c, ce, VerifyOptions{});
    const VerifySummary vc = verify_parallel(c, cc, VerifyOptions{});
    runs += ve.runs + vc.runs;
    if (first.empty() && !(ve.ok() && vc.ok()))
      first = c.name() + ": " + to_text(ve.ok() ? vc : ve);
    ok = ok && ve.ok() && vc.ok();
    // Backends compared directly against each other, seed by seed.
    const std::size_t n = c.inputs().size();
    for (std::uint64_t x = 0; x < (1ull << n); ++x) {
      const auto bits = oracle::bits_of(x, n);
      const auto want = oracle::evaluate(c, bits);
      for (std::uint64_t seed : {0ull, 7ull}) {
        const RunResult a = run_program(ce.program, bits, seed);
        const RunResult b = run_program(cc.program, bits, seed);
        if (!(a.decoded.ok() && b.decoded.ok() && a.decoded.bits == b.decoded.bits && a.decoded.bits == want))
          ++disagreements;
      }
    }
    exp_summaries.push_back(ve);
    catalyst_summaries.push_back(vc);
  }
  const double secs = since(t0);
  ok = ok && disagreements == 0 && bad_shape == 0;
  char buf[256];
  std::snprintf(buf, sizeof buf, "100 circuits x {exp, catalyst}, %zu runs, cross-backend disagreements %zu, %.1fs (target < 120s)%s",
                runs, disagreements, secs, secs < 120.0 ? "" : " OVER TARGET");
  report(5, ok && secs < 120.0, buf + (first.empty() ? std::string() : " first failure: " + first));
}

void criterion6() {
  const auto t0 = Clock::now();
  VerifyOptions opt;
  opt.seeds = {0};
  opt.exhaustive = true;
  opt.volume_cap = 14;
  std::size_t checked = 0, skipped = 0, terminals = 0, instances = 0;
  bool ok = true;
  std::string first;
  auto check = [&](const Circuit& c, Backend b) {
    const VerifySummary v = verify_parallel(c, compile(c, b), opt);
    ++instances;
    checked += v.exhaustive_checked;
    skipped += v.exhaustive_skipped;
    terminals += v.terminals;
    if (!v.ok() && first.empty())
      first = c.name() + " [" + std::string(to_string(b)) + "]";
    ok = ok && v.ok();
  };
  for (const char* f : {"and_gate_example.net", "fig_indexingformula.net", "and_fanout2.net", "not_fanout3.net"}) {
    const Circuit c = oracle::load(f);
    for (Backend b : {Backend::Exp, Backend::Catalyst})
      check(c, b);
    if (c.is_formula() && c.outputs().size() == 1)
      check(c, Backend::Formula);
  }
  for (const Circuit& c : formula_suite())
    check(c, Backend::Formula);
  for (const Circuit& c : circuit_suite()) {
    check(c, Backend::Exp);
    check(c, Backend::Catalyst);
  }
  const double secs = since(t0);
  ok = ok && checked > 0;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "%zu instances, %zu (instance, input) pairs enumerated at volume <= 14, %zu over cap, %zu terminals, "
                "all decode uniformly, %.1fs",
                instances, checked, skipped, terminals, secs);
  report(6, ok, buf + (first.empty() ? std::string() : " first failure: " + first));
}

void criterion7() {
  // Bounds use G counting every gate, sources included, as in the indexing figure.
  std::size_t violations = 0, catalyst_strict_violations = 0;
  std::string first;
  auto note = [&](const std::string& s) {
    ++violations;
    if (first.empty())
      first = s;
  };
  const auto& fs = formula_suite();
  for (std::size_t k = 0; k < fs.size(); ++k) {
    const Circuit& c = fs[k];
    const CircuitStats s = stats(c);
    const Count g = s.total_gates();
    const auto rep = compile_formula(c).report;
    if (rep.species_count > 8 * g)
      note(c.name() + " species " + std::to_string(rep.species_count));
    if (rep.step_count > 4 * s.depth + 2)
      note(c.name() + " steps " + std::to_string(rep.step_count));
    if (formula_summaries.size() == fs.size() && formula_summaries[k].max_peak > 8 * g)
      note(c.name() + " peak " + std::to_string(formula_summaries[k].max_peak));
  }
  const auto& cs = circuit_suite();
  Count worst_static_ratio_num = 0, worst_static_ratio_den = 1;
  for (std::size_t k = 0; k < cs.size(); ++k) {
    const Circuit& c = cs[k];
    const CircuitStats s = stats(c);
    Count bound = 8 * s.total_gates();
    for (std::size_t d = 0; d < s.depth; ++d)
      bound *= s.fan_out;
    const auto exp = compile_circuit_exp(c).report;
    if (exp.static_volume > bound)
      note(c.name() + " static " + std::to_string(exp.static_volume) + " > " + std::to_string(bound));
    if (exp.static_volume * worst_static_ratio_den > worst_static_ratio_num * bound) {
      worst_static_ratio_num = exp.static_volume;
      worst_static_ratio_den = bound;
    }
    const auto cat = compile_circuit_catalyst(c).report;
    if (catalyst_summaries.size() == cs.size()) {
      const Count resident = catalyst_summaries[k].max_resident;
      if (resident > 8 * cat.compiled_width)
        note(c.name() + " resident " + std::to_string(resident));
      if (resident > 8 * s.width)
        ++catalyst_strict_violations;
    }
  }
  const bool have = formula_summaries.size() == fs.size() && catalyst_summaries.size() == cs.size();
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "species<=8G, steps<=4D+2, peak<=8G (formula); static<=8G*F^D (exp, worst ratio %.3f); resident<=8W "
                "with W over compiled levels (catalyst; %zu exceed 8x non-source width); violations %zu",
                static_cast<double>(worst_static_ratio_num) / static_cast<double>(worst_static_ratio_den),
                catalyst_strict_violations, violations);
  report(7, have && violations == 0, buf + (first.empty() ? std::string() : " first: " + first));
}

void criterion8() {
  std::size_t rules = 0, bad = 0;
  std::string first;
  auto check = [&](const Circuit& c, Backend b) {
    const Compilation comp = compile(c, b);
    for (const Rule& r : comp.program.rules) {
      ++rules;
      const RuleClass k = classify_rule(r);
      const bool tv = k.family == RuleFamily::TrueVoid && k.reactant_volume == 2 && k.product_volume == 0;
      const bool cv = k.family == RuleFamily::CatalyticVoid && k.reactant_volume == 2 && k.product_volume == 1;
      if (!(tv || (b == Backend::Catalyst && cv))) {
        ++bad;
        if (first.empty())
          first = r.to_string(comp.program.alphabet);
      }
    }
  };
  for (const Circuit& c : formula_suite())
    check(c, Backend::Formula);
  for (const Circuit& c : circuit_suite()) {
    check(c, Backend::Exp);
    check(c, Backend::Catalyst);
  }
  report(8, bad == 0 && rules > 0,
         std::to_string(rules) + " rules classified, " + std::to_string(bad) + " outside the allowed families " + first);
}

void criterion9() {
  const auto t0 = Clock::now();
  const auto fib = oracle::fibonacci(20);
  bool ok = fib[10] == 89 && fib[20] == 10946;
  const CopyBounds cb = min_copy_bounds(20);
  ok = ok && cb.bound.size() == 21;
  for (std::size_t k = 0; ok && k <= 20; ++k)
    ok = cb.bound[k] == fib[k];
  Count demand20 = 0;
  for (std::size_t d = 1; d <= 20; ++d) {
    const Circuit v = build_VD(d);
    const Compilation comp = compile_circuit_exp(v);
    const Count demand = comp.report.demand.at(v.inputs().at(0));
    ok = ok && demand >= fib[d] && comp.report.static_volume >= fib[d];
    const FibReport r = verify_fib_growth(d);
    ok = ok && r.pass && r.demand_x1 == demand;
    if (d == 20)
      demand20 = demand;
  }
  const double secs = since(t0);
  ok = ok && secs < 10.0;
  report(9, ok, "copy bounds equal a_0..a_20 (a_20=" + std::to_string(fib[20]) + "), V_20 demand(x1)=" +
                    std::to_string(demand20) + " time=" + std::to_string(secs) + "s");
}

void criterion10() {
  std::vector<std::pair<StepProgram, std::vector<bool>>> cases;
  cases.emplace_back(compile_formula(oracle::load("fig_indexingformula.net")).program,
                     std::vector<bool>{true, false, false, true});
  cases.emplace_back(compile_circuit_exp(oracle::load("and_fanout2.net")).program, std::vector<bool>{true, false});
  cases.emplace_back(compile_circuit_catalyst(oracle::load("and_fanout2.net")).program, std::vector<bool>{true, false});
  for (std::size_t k = 0; k < 10; ++k) {
    const Circuit& c = circuit_suite()[k];
    cases.emplace_back(compile_circuit_catalyst(c).program, std::vector<bool>(c.inputs().size(), k % 2 == 0));
    cases.emplace_back(compile_circuit_exp(c).program, std::vector<bool>(c.inputs().size(), k % 2 == 1));
  }
  RunOptions opt;
  opt.trace = true;
  std::size_t checks = 0;
  bool ok = true;
  for (const auto& [p, bits] : cases)
    for (std::uint64_t seed : {0ull, 3ull, 12345ull}) {
      const RunResult first = run_program(p, bits, seed, opt);
      const std::string text = render(first, p.alphabet);
      for (int rep = 0; rep < 2; ++rep) {
        const RunResult again = run_program(p, bits, seed, opt);
        ok = ok && again == first && render(again, p.alphabet) == text && again.trace == first.trace;
        ++checks;
      }
    }
  report(10, ok, std::to_string(cases.size()) + " programs x 3 seeds repeated 3x, " + std::to_string(checks) +
                     " byte-identical comparisons of results and traces");
}

} // namespace

int main() {
  const auto t0 = Clock::now();
  const std::pair<int, void (*)()> criteria[] = {{1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4},
                                                 {5, criterion5}, {6, criterion6}, {7, criterion7}, {8, criterion8},
                                                 {9, criterion9}, {10, criterion10}};
  for (const auto& [n, run] : criteria) {
    try {
      run();
    } catch (const std::exception& e) {
      report(n, false, std::string("exception: ") + e.what());
    }
  }
  std::printf("acceptance: %d failed, %.1fs total\n", failures, since(t0));
  return failures == 0 ? 0 : 1;
}
