#include "stepcrn/verify.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

namespace stepcrn {

std::vector<std::uint64_t> VerifyOptions::default_seeds() {
  std::vector<std::uint64_t> s(25);
  for (std::uint64_t k = 0; k < s.size(); ++k)
    s[k] = k;
  return s;
}

bool operator==(const VerifySummary& a, const VerifySummary& b) {
  auto key = [](const VerifySummary& s) {
    return std::tie(s.inputs, s.runs, s.passed, s.failed, s.exhaustive_checked, s.exhaustive_skipped, s.terminals,
                    s.max_peak, s.max_resident);
  };
  if (key(a) != key(b) || a.first.has_value() != b.first.has_value())
    return false;
  if (!a.first)
    return true;
  const auto& x = *a.first;
  const auto& y = *b.first;
  return x.circuit == y.circuit && x.input == y.input && x.seed == y.seed && x.expected == y.expected &&
         x.got == y.got && x.terminal == y.terminal;
}

std::vector<std::vector<bool>> select_inputs(std::size_t n, const VerifyOptions& options) {
  std::vector<std::vector<bool>> out;
  auto bits_of = [n](std::uint64_t v) {
    std::vector<bool> b(n);
    for (std::size_t i = 0; i < n; ++i)
      b[i] = (v >> (n - 1 - i)) & 1;
    return b;
  };
  if (options.mode == InputMode::All) {
    if (n > options.input_cap)
      throw ValidationError("ALL mode needs at most " + std::to_string(options.input_cap) + " inputs, circuit has " +
                            std::to_string(n));
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v)
      out.push_back(bits_of(v));
    return out;
  }
  if (n > 63)
    throw ValidationError("too many inputs for RANDOM mode");
  std::mt19937_64 rng(options.input_seed);
  const std::uint64_t space = std::uint64_t{1} << n;
  const std::size_t want = static_cast<std::size_t>(std::min<std::uint64_t>(options.random_count, space));
  std::set<std::uint64_t> seen;
  while (out.size() < want) {
    const std::uint64_t v = rng() & (space - 1);
    if (seen.insert(v).second)
      out.push_back(bits_of(v));
  }
  return out;
}

namespace {

struct ItemResult {
  bool ok = true;
  Count peak = 0;
  Count resident = 0;
  std::string got;
  std::string terminal;
};

struct InputResult {
  bool skipped = false;
  bool ok = true;
  std::size_t terminals = 0;
  std::string got;
  std::string terminal;
};

std::string decoded_text(const Decoded& d) { return d.ok() ? format_bits(d.bits) : d.error; }

ItemResult run_item(Simulator& sim, const Compilation& comp, const std::vector<bool>& input,
                    const std::vector<bool>& expected, std::uint64_t seed) {
  RunOptions opt;
  opt.record_steps = false;
  ItemResult r;
  try {
    const RunResult run = sim.run_program(comp.program, input, seed, opt);
    r.peak = run.peak_volume;
    for (Count v : resident_volume_by_level(comp.report, run.terminal_volume))
      r.resident = std::max(r.resident, v);
    r.ok = run.decoded.ok() && run.decoded.bits == expected;
    if (!r.ok) {
      r.got = decoded_text(run.decoded);
      r.terminal = run.final.to_string(comp.program.alphabet);
    }
  } catch (const Error& e) {
    r.ok = false;
    r.got = std::string("error: ") + e.what();
  }
  return r;
}

InputResult exhaust_input(const Compilation& comp, const std::vector<bool>& input, const std::vector<bool>& expected,
                          const VerifyOptions& options) {
  InputResult r;
  try {
    const ProgramTerminals t = enumerate_program_terminals(comp.program, input, options.volume_cap, options.state_cap);
    if (t.skipped) {
      r.skipped = true;
      return r;
    }
    r.terminals = t.terminals.size();
    for (const Configuration& c : t.terminals) {
      const Decoded d = decode_output(c, comp.program);
      if (!d.ok() || d.bits != expected) {
        r.ok = false;
        r.got = decoded_text(d);
        r.terminal = c.to_string(comp.program.alphabet);
        break;
      }
    }
  } catch (const CapacityError&) {
    r.skipped = true;
  }
  return r;
}

VerifySummary aggregate(const Circuit& circuit, const std::vector<std::vector<bool>>& inputs,
                        const std::vector<std::vector<bool>>& expected, const VerifyOptions& options,
                        const std::vector<ItemResult>& items, const std::vector<InputResult>& exhaustive) {
  VerifySummary s;
  s.inputs = inputs.size();
  const std::size_t seeds = options.seeds.size();
  for (std::size_t k = 0; k < items.size(); ++k) {
    const ItemResult& r = items[k];
    ++s.runs;
    s.max_peak = std::max(s.max_peak, r.peak);
    s.max_resident = std::max(s.max_resident, r.resident);
    if (r.ok) {
      ++s.passed;
      continue;
    }
    ++s.failed;
    if (!s.first)
      s.first = Counterexample{circuit.name(), inputs[k / seeds], options.seeds[k % seeds], expected[k / seeds],
                               r.got, r.terminal};
  }
  for (std::size_t i = 0; i < exhaustive.size(); ++i) {
    const InputResult& r = exhaustive[i];
    if (r.skipped) {
      ++s.exhaustive_skipped;
      continue;
    }
    ++s.exhaustive_checked;
    s.terminals += r.terminals;
    if (!r.ok) {
      ++s.failed;
      if (!s.first)
        s.first = Counterexample{circuit.name(), inputs[i], std::nullopt, expected[i], r.got, r.terminal};
    }
  }
  return s;
}

struct Plan {
  std::vector<std::vector<bool>> inputs;
  std::vector<std::vector<bool>> expected;
};

Plan plan(const Circuit& circuit, const Compilation& comp, const VerifyOptions& options) {
  if (comp.program.inputs.size() != circuit.inputs().size())
    throw ValidationError("program has " + std::to_string(comp.program.inputs.size()) + " inputs, circuit has " +
                          std::to_string(circuit.inputs().size()));
  if (comp.program.outputs.size() != circuit.outputs().size())
    throw ValidationError("program has " + std::to_string(comp.program.outputs.size()) + " outputs, circuit has " +
                          std::to_string(circuit.outputs().size()));
  Plan p;
  p.inputs = select_inputs(circuit.inputs().size(), options);
  for (const auto& in : p.inputs)
    p.expected.push_back(evaluate(circuit, in));
  return p;
}

} // namespace

VerifySummary verify_serial(const Circuit& circuit, const Compilation& comp, const VerifyOptions& options) {
  const Plan p = plan(circuit, comp, options);
  const std::size_t seeds = options.seeds.size();
  std::vector<ItemResult> items(p.inputs.size() * seeds);
  Simulator sim(comp.program.alphabet, comp.program.rules);
  for (std::size_t k = 0; k < items.size(); ++k)
    items[k] = run_item(sim, comp, p.inputs[k / seeds], p.expected[k / seeds], options.seeds[k % seeds]);
  std::vector<InputResult> exhaustive;
  if (options.exhaustive)
    for (std::size_t i = 0; i < p.inputs.size(); ++i)
      exhaustive.push_back(exhaust_input(comp, p.inputs[i], p.expected[i], options));
  return aggregate(circuit, p.inputs, p.expected, options, items, exhaustive);
}

VerifySummary verify_parallel(const Circuit& circuit, const Compilation& comp, const VerifyOptions& options) {
  const Plan p = plan(circuit, comp, options);
  const std::size_t seeds = options.seeds.size();
  const long total = static_cast<long>(p.inputs.size() * seeds);
  std::vector<ItemResult> items(static_cast<std::size_t>(total));
#pragma omp parallel
  {
    Simulator sim(comp.program.alphabet, comp.program.rules);
#pragma omp for schedule(dynamic, 16)
    for (long k = 0; k < total; ++k) {
      const auto i = static_cast<std::size_t>(k);
      items[i] = run_item(sim, comp, p.inputs[i / seeds], p.expected[i / seeds], options.seeds[i % seeds]);
    }
  }
  std::vector<InputResult> exhaustive;
  if (options.exhaustive) {
    exhaustive.resize(p.inputs.size());
    const long n = static_cast<long>(p.inputs.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) {
      const auto u = static_cast<std::size_t>(i);
      exhaustive[u] = exhaust_input(comp, p.inputs[u], p.expected[u], options);
    }
  }
  return aggregate(circuit, p.inputs, p.expected, options, items, exhaustive);
}

std::string to_text(const VerifySummary& s) {
  std::ostringstream out;
  out << "inputs=" << s.inputs << " runs=" << s.runs << " passed=" << s.passed << " failed=" << s.failed
      << " exhaustive_checked=" << s.exhaustive_checked << " exhaustive_skipped=" << s.exhaustive_skipped
      << " terminals=" << s.terminals << " max_peak=" << s.max_peak << " max_resident=" << s.max_resident << '\n';
  if (s.first) {
    const auto& c = *s.first;
    out << "counterexample: circuit=" << c.circuit << " input=" << format_bits(c.input)
        << " seed=" << (c.seed ? std::to_string(*c.seed) : std::string("exhaustive"))
        << " expected=" << format_bits(c.expected) << " got=" << c.got << '\n';
    if (!c.terminal.empty())
      out << "terminal: " << c.terminal << '\n';
  }
  out << (s.ok() ? "PASS" : "FAIL") << '\n';
  return out.str();
}

std::string to_json(const VerifySummary& s) {
  nlohmann::ordered_json j;
  j["inputs"] = s.inputs;
  j["runs"] = s.runs;
  j["passed"] = s.passed;
  j["failed"] = s.failed;
  j["exhaustive_checked"] = s.exhaustive_checked;
  j["exhaustive_skipped"] = s.exhaustive_skipped;
  j["terminals"] = s.terminals;
  j["max_peak"] = s.max_peak;
  j["max_resident"] = s.max_resident;
  if (s.first) {
    const auto& c = *s.first;
    j["counterexample"] = {{"circuit", c.circuit},
                           {"input", format_bits(c.input)},
                           {"seed", c.seed ? nlohmann::ordered_json(*c.seed) : nlohmann::ordered_json(nullptr)},
                           {"expected", format_bits(c.expected)},
                           {"got", c.got},
                           {"terminal", c.terminal}};
  }
  j["pass"] = s.ok();
  return j.dump(2) + "\n";
}

} // namespace stepcrn
