// stepcrn: compile threshold circuits to step CRN programs, run and verify them.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "stepcrn/compiler.hpp"
#include "stepcrn/corpus.hpp"
#include "stepcrn/engine.hpp"
#include "stepcrn/lowerbound.hpp"
#include "stepcrn/verify.hpp"

using namespace stepcrn;

namespace {

constexpr int kPass = 0;
constexpr int kCounterexample = 1;
constexpr int kUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error("cannot write '" + path + "'");
  out << text;
}

Circuit load_circuit(const std::string& path) {
  try {
    return parse_circuit(read_file(path));
  } catch (const ParseError& e) {
    throw Error(path + ": " + e.what());
  } catch (const ValidationError& e) {
    throw Error(path + ": " + e.what());
  }
}

Range parse_range(const std::string& text) {
  const auto dash = text.find('-');
  try {
    if (dash == std::string::npos) {
      const auto v = std::stoul(text);
      return {v, v};
    }
    return {std::stoul(text.substr(0, dash)), std::stoul(text.substr(dash + 1))};
  } catch (const std::exception&) {
    throw ValidationError("bad range '" + text + "' (expected N or MIN-MAX)");
  }
}

// "0-24" or "1,4,9".
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream in(text);
  for (std::string part; std::getline(in, part, ',');) {
    const Range r = parse_range(part);
    if (r.min > r.max)
      throw ValidationError("bad seed range '" + part + "'");
    for (std::uint64_t s = r.min; s <= r.max; ++s)
      out.push_back(s);
  }
  if (out.empty())
    throw ValidationError("no seeds given");
  return out;
}

Backend backend_of(const std::string& name) {
  auto b = parse_backend(name);
  if (!b)
    throw ValidationError("unknown backend '" + name + "' (formula, exp, catalyst)");
  return *b;
}

struct CompileArgs {
  std::string circuit;
  std::string backend = "formula";
  std::string out;
  bool json = false;
};

int cmd_compile(const CompileArgs& a) {
  const Circuit c = load_circuit(a.circuit);
  const Compilation comp = compile(c, backend_of(a.backend));
  const std::string program = serialize(comp.program);
  const std::string report = a.json ? to_json(comp.report) : to_key_value(comp.report);
  if (a.out.empty()) {
    std::cout << program << "# report\n" << report;
  } else {
    write_file(a.out, program);
    const std::string report_path = a.out + (a.json ? ".report.json" : ".report");
    write_file(report_path, report);
    std::cout << "wrote " << a.out << " (" << comp.report.step_count << " steps, " << comp.report.species_count
              << " species, " << comp.report.rule_count << " rules) and " << report_path << '\n';
  }
  return kPass;
}

struct RunArgs {
  std::string program;
  std::string input;
  std::uint64_t seed = 0;
  bool trace = false;
  bool json = false;
};

int cmd_run(const RunArgs& a) {
  StepProgram p;
  try {
    p = parse_program(read_file(a.program));
  } catch (const ParseError& e) {
    throw Error(a.program + ": " + e.what());
  }
  const std::vector<bool> bits = parse_bits(a.input);
  if (bits.size() != p.inputs.size())
    throw ValidationError("program takes " + std::to_string(p.inputs.size()) + " input bits, got " +
                          std::to_string(bits.size()));
  RunOptions opt;
  opt.trace = a.trace;
  const RunResult r = run_program(p, bits, a.seed, opt);
  if (a.json) {
    nlohmann::ordered_json j;
    j["output"] = r.decoded.ok() ? format_bits(r.decoded.bits) : r.decoded.error;
    j["ok"] = r.decoded.ok();
    j["peak_volume"] = r.peak_volume;
    j["steps"] = r.step_count;
    j["applications"] = r.applications;
    j["final"] = r.final.to_string(p.alphabet);
    if (a.trace)
      j["trace"] = r.trace;
    std::cout << j.dump(2) << '\n';
  } else {
    for (const auto& line : r.trace)
      std::cout << line << '\n';
    if (r.decoded.ok())
      std::cout << "output: " << format_bits(r.decoded.bits) << '\n';
    else
      std::cout << "output: error " << r.decoded.error << '\n';
    std::cout << "peak volume: " << r.peak_volume << '\n' << "steps: " << r.step_count << '\n';
  }
  if (!r.decoded.ok()) {
    std::cerr << "decode error: " << r.decoded.error << '\n';
    return kCounterexample;
  }
  return kPass;
}

struct VerifyArgs {
  std::vector<std::string> circuits;
  std::string backend = "formula";
  std::string program;
  std::string inputs = "all";
  std::size_t count = 32;
  std::string seeds = "0-24";
  bool exhaustive = false;
  Count volume_cap = 14;
  std::size_t input_cap = 12;
  bool serial = false;
  bool json = false;
};

int cmd_verify(const VerifyArgs& a) {
  VerifyOptions opt;
  if (a.inputs == "all")
    opt.mode = InputMode::All;
  else if (a.inputs == "random")
    opt.mode = InputMode::Random;
  else
    throw ValidationError("--inputs must be 'all' or 'random'");
  opt.random_count = a.count;
  opt.seeds = parse_seeds(a.seeds);
  opt.exhaustive = a.exhaustive;
  opt.volume_cap = a.volume_cap;
  opt.input_cap = a.input_cap;
  if (!a.program.empty() && a.circuits.size() != 1)
    throw ValidationError("--program needs exactly one circuit");

  const Backend backend = backend_of(a.backend);
  bool all_ok = true;
  nlohmann::ordered_json report = nlohmann::ordered_json::array();
  for (const auto& path : a.circuits) {
    const Circuit c = load_circuit(path);
    Compilation comp = compile(c, backend);
    if (!a.program.empty()) {
      try {
        comp.program = parse_program(read_file(a.program));
      } catch (const ParseError& e) {
        throw Error(a.program + ": " + e.what());
      }
    }
    const VerifySummary s = a.serial ? verify_serial(c, comp, opt) : verify_parallel(c, comp, opt);
    all_ok = all_ok && s.ok();
    if (a.json) {
      auto j = nlohmann::ordered_json::parse(to_json(s));
      j["circuit"] = path;
      j["backend"] = a.backend;
      report.push_back(j);
    } else {
      std::cout << path << " [" << a.backend << "] " << to_text(s);
    }
  }
  if (a.json)
    std::cout << report.dump(2) << '\n';
  else if (a.circuits.size() > 1)
    std::cout << (all_ok ? "ALL PASS" : "SOME FAILED") << '\n';
  return all_ok ? kPass : kCounterexample;
}

struct LowerboundArgs {
  std::size_t min_depth = 1;
  std::size_t max_depth = 20;
  std::string completion = "001,010,100";
  bool json = false;
};

int cmd_lowerbound(const LowerboundArgs& a) {
  if (a.min_depth < 1 || a.min_depth > a.max_depth)
    throw ValidationError("need 1 <= --min-depth <= --max-depth");
  std::vector<std::string> parts;
  std::stringstream in(a.completion);
  for (std::string p; std::getline(in, p, ',');)
    parts.push_back(p);
  if (parts.size() != 3)
    throw ValidationError("--completion needs three values for rows 001,010,100");
  const SFunctionSpec spec(parse_bits3(parts[0]), parse_bits3(parts[1]), parse_bits3(parts[2]));

  const CopyBounds bounds = min_copy_bounds(a.max_depth, spec);
  const auto fib = fibonacci(a.max_depth);
  bool ok = bounds.bound == fib;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  if (!a.json)
    std::cout << "D\ta_D\tbound\tdemand_x1\tstatic_volume\tresult\n";
  for (std::size_t d = a.min_depth; d <= a.max_depth; ++d) {
    const FibReport r = verify_fib_growth(d, spec);
    ok = ok && r.pass;
    if (a.json)
      rows.push_back({{"D", d},
                      {"a_D", r.fib},
                      {"bound", bounds.bound[d]},
                      {"demand_x1", r.demand_x1},
                      {"static_volume", r.static_volume},
                      {"pass", r.pass}});
    else
      std::cout << d << '\t' << r.fib << '\t' << bounds.bound[d] << '\t' << r.demand_x1 << '\t' << r.static_volume
                << '\t' << (r.pass ? "pass" : "FAIL") << '\n';
  }
  if (a.json) {
    nlohmann::ordered_json j;
    j["rows"] = rows;
    j["chain_matches_fibonacci"] = bounds.bound == fib;
    j["pass"] = ok;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "copy-bound chain " << (bounds.bound == fib ? "matches" : "DOES NOT match") << " a_0..a_"
              << a.max_depth << '\n'
              << (ok ? "PASS" : "FAIL") << '\n';
  }
  return ok ? kPass : kCounterexample;
}

struct CorpusArgs {
  std::string out = "corpus";
  std::string prefix = "circuit";
  std::uint64_t seed = 0;
  std::size_t count = 10;
  std::string depth = "1-4";
  std::string gates = "1-20";
  std::string inputs = "1-6";
  std::string fan_in = "2-3";
  std::string fan_out = "1";
  double maj = 0.25;
  double nots = 0.15;
};

int cmd_gen_corpus(const CorpusArgs& a) {
  CorpusSpec spec;
  spec.depth = parse_range(a.depth);
  spec.gates = parse_range(a.gates);
  spec.inputs = parse_range(a.inputs);
  spec.fan_in = parse_range(a.fan_in);
  spec.fan_out = parse_range(a.fan_out);
  spec.maj_fraction = a.maj;
  spec.not_fraction = a.nots;
  spec.seed = a.seed;
  spec.count = a.count;
  const auto paths = write_corpus(generate_corpus(spec), a.out, a.prefix);
  for (const auto& p : paths)
    std::cout << p << '\n';
  return kPass;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compile threshold circuits to step CRNs with bimolecular void rules, run and verify them"};
  app.require_subcommand(1);

  CompileArgs ca;
  auto* compile_cmd = app.add_subcommand("compile", "Lower a circuit to a step CRN program");
  compile_cmd->add_option("circuit", ca.circuit, "Netlist (text or JSON)")->required();
  compile_cmd->add_option("-b,--backend", ca.backend, "formula, exp or catalyst");
  compile_cmd->add_option("-o,--out", ca.out, "Program file; the report goes next to it");
  compile_cmd->add_flag("--json", ca.json, "Write the report as JSON");

  RunArgs ra;
  auto* run_cmd = app.add_subcommand("run", "Execute a program on one input");
  run_cmd->add_option("program", ra.program, "Program file")->required();
  run_cmd->add_option("-i,--input", ra.input, "Input bits, first input first")->required();
  run_cmd->add_option("-s,--seed", ra.seed, "Scheduler seed");
  run_cmd->add_flag("--trace", ra.trace, "Print every rule application");
  run_cmd->add_flag("--json", ra.json, "JSON output");

  VerifyArgs va;
  auto* verify_cmd = app.add_subcommand("verify", "Check compiled outputs against direct evaluation");
  verify_cmd->add_option("circuits", va.circuits, "Netlists")->required();
  verify_cmd->add_option("-b,--backend", va.backend, "formula, exp or catalyst");
  verify_cmd->add_option("--program", va.program, "Check this program instead of the compiled one");
  verify_cmd->add_option("--inputs", va.inputs, "all or random");
  verify_cmd->add_option("--count", va.count, "Assignments drawn in random mode");
  verify_cmd->add_option("--seeds", va.seeds, "Scheduler seeds, e.g. 0-24 or 1,5,9");
  verify_cmd->add_flag("--exhaustive", va.exhaustive, "Also enumerate every terminal configuration");
  verify_cmd->add_option("--volume-cap", va.volume_cap, "Largest step-entry volume for exhaustive mode");
  verify_cmd->add_option("--input-cap", va.input_cap, "Largest input count for all-inputs mode");
  verify_cmd->add_flag("--serial", va.serial, "Use the single-threaded reference path");
  verify_cmd->add_flag("--json", va.json, "JSON output");

  LowerboundArgs la;
  auto* lb_cmd = app.add_subcommand("lowerbound", "Fibonacci copy-count growth on the V_D family");
  lb_cmd->add_option("--min-depth", la.min_depth, "Smallest D");
  lb_cmd->add_option("--max-depth", la.max_depth, "Largest D");
  lb_cmd->add_option("--completion", la.completion, "Values of s at rows 001,010,100");
  lb_cmd->add_flag("--json", la.json, "JSON output");

  CorpusArgs ga;
  auto* gen_cmd = app.add_subcommand("gen-corpus", "Write random circuits");
  gen_cmd->add_option("-o,--out", ga.out, "Output directory");
  gen_cmd->add_option("--prefix", ga.prefix, "File name prefix");
  gen_cmd->add_option("--seed", ga.seed, "Generator seed");
  gen_cmd->add_option("--count", ga.count, "Number of circuits");
  gen_cmd->add_option("--depth", ga.depth, "Depth range MIN-MAX");
  gen_cmd->add_option("--gates", ga.gates, "Non-source gate count range");
  gen_cmd->add_option("--inputs", ga.inputs, "Input count range");
  gen_cmd->add_option("--fan-in", ga.fan_in, "Fan-in range (NOT is always 1)");
  gen_cmd->add_option("--fan-out", ga.fan_out, "Fan-out range; 1 gives formulas");
  gen_cmd->add_option("--maj", ga.maj, "Probability a gate is MAJ");
  gen_cmd->add_option("--not", ga.nots, "Probability a non-MAJ gate is NOT");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*compile_cmd)
      return cmd_compile(ca);
    if (*run_cmd)
      return cmd_run(ra);
    if (*verify_cmd)
      return cmd_verify(va);
    if (*lb_cmd)
      return cmd_lowerbound(la);
    if (*gen_cmd)
      return cmd_gen_corpus(ga);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
