#include "stepcrn/engine.hpp"

#include <limits>
#include <sstream>
#include <unordered_set>

namespace stepcrn {

namespace {

constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

struct CountsHash {
  std::size_t operator()(const std::vector<Count>& v) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (Count c : v) {
      h ^= c + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

} // namespace

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  // Lemire's nearly divisionless method on 64-bit draws.
  const std::uint64_t range = n;
  unsigned __int128 m = static_cast<unsigned __int128>(rng()) * range;
  auto low = static_cast<std::uint64_t>(m);
  if (low < range) {
    const std::uint64_t threshold = (0 - range) % range;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(rng()) * range;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::size_t>(m >> 64);
}

Simulator::Simulator(const Alphabet& alphabet, const std::vector<Rule>& rules)
    : alphabet_(alphabet), rules_(rules), by_reactant_(alphabet.size()), slot_(rules.size(), npos) {
  rule_text_.reserve(rules.size());
  for (std::size_t r = 0; r < rules.size(); ++r) {
    rule_text_.push_back(rules[r].to_string(alphabet));
    for (const Term& t : rules[r].reactants()) {
      if (t.species >= alphabet.size())
        throw ValidationError("rule references a species outside the alphabet");
      by_reactant_[t.species].push_back(r);
    }
    for (const Term& t : rules[r].products())
      if (t.species >= alphabet.size())
        throw ValidationError("rule references a species outside the alphabet");
    all_void_ = all_void_ && is_void(classify_rule(rules[r]));
  }
}

void Simulator::mark(std::size_t rule, bool on) {
  if (on == (slot_[rule] != npos))
    return;
  if (on) {
    slot_[rule] = active_.size();
    active_.push_back(rule);
  } else {
    const std::size_t at = slot_[rule];
    const std::size_t last = active_.back();
    active_[at] = last;
    slot_[last] = at;
    active_.pop_back();
    slot_[rule] = npos;
  }
}

void Simulator::refresh(const Configuration& c, std::size_t rule) {
  bool ok = true;
  for (const Term& t : rules_[rule].reactants())
    if (c[t.species] < t.count) {
      ok = false;
      break;
    }
  mark(rule, ok);
}

void Simulator::run_step(Configuration& c, const std::vector<Term>& additions, std::mt19937_64& rng,
                         const RunOptions& options, std::size_t step_index, std::vector<std::string>* trace,
                         bool full_scan) {
  if (c.size() != alphabet_.size())
    throw ValidationError("configuration and program use different alphabets");
  c.add(additions);
  Count volume = c.volume();
  peak_ = std::max(peak_, volume);

  if (full_scan) {
    for (std::size_t r : active_)
      slot_[r] = npos;
    active_.clear();
    for (std::size_t r = 0; r < rules_.size(); ++r)
      refresh(c, r);
  } else {
    for (const Term& t : additions)
      for (std::size_t r : by_reactant_[t.species])
        refresh(c, r);
  }

  Count used = 0;
  while (!active_.empty()) {
    if (!all_void_ && used >= options.budget)
      throw BudgetError("step " + std::to_string(step_index) + " exceeded " + std::to_string(options.budget) +
                        " rule applications");
    const std::size_t r = active_[uniform_index(rng, active_.size())];
    for (const auto& [s, d] : rules_[r].delta()) {
      c[s] = static_cast<Count>(static_cast<long long>(c[s]) + d);
      volume = static_cast<Count>(static_cast<long long>(volume) + d);
    }
    ++used;
    ++applications_;
    peak_ = std::max(peak_, volume);
    if (trace)
      trace->push_back("step=" + std::to_string(step_index) + " rule=" + rule_text_[r] +
                       " volume=" + std::to_string(volume));
    for (const auto& [s, d] : rules_[r].delta())
      for (std::size_t q : by_reactant_[s])
        refresh(c, q);
  }
}

RunResult Simulator::run_program(const StepProgram& program, const std::vector<bool>& bits, std::uint64_t seed,
                                 const RunOptions& options) {
  if (&program.alphabet != &alphabet_ || &program.rules != &rules_)
    throw ValidationError("simulator was built for a different program");
  RunResult result;
  std::mt19937_64 rng(seed);
  applications_ = 0;
  peak_ = 0;
  Configuration c(alphabet_.size());
  for (std::size_t k = 0; k < program.steps.size(); ++k) {
    const std::vector<Term> add = k == 0 ? program.initial_additions(bits) : program.steps[k];
    Count added = 0;
    for (const Term& t : add)
      if (!checked_add(added, t.count, added))
        throw ValidationError("step volume overflow");
    result.entry_volume.push_back(c.volume() + added);
    run_step(c, add, rng, options, k, options.trace ? &result.trace : nullptr, k == 0);
    result.terminal_volume.push_back(c.volume());
    if (options.record_steps)
      result.per_step_terminal.push_back(c);
  }
  if (program.steps.empty() && !bits.empty())
    throw ValidationError("program has no steps to carry input");
  result.step_count = program.steps.size();
  result.applications = applications_;
  result.peak_volume = peak_;
  result.decoded = decode_output(c, program);
  result.final = std::move(c);
  return result;
}

Configuration run_step(const Configuration& c, const std::vector<Term>& additions, const std::vector<Rule>& rules,
                       std::uint64_t seed, Count budget) {
  Alphabet scratch;
  for (std::size_t i = 0; i < c.size(); ++i)
    scratch.intern("s" + std::to_string(i));
  Simulator sim(scratch, rules);
  std::mt19937_64 rng(seed);
  Configuration out = c;
  RunOptions opt;
  opt.budget = budget;
  sim.run_step(out, additions, rng, opt);
  return out;
}

RunResult run_program(const StepProgram& program, const std::vector<bool>& bits, std::uint64_t seed,
                      const RunOptions& options) {
  Simulator sim(program.alphabet, program.rules);
  return sim.run_program(program, bits, seed, options);
}

Decoded decode_output(const Configuration& c, const StepProgram& program) {
  Decoded d;
  for (const auto& out : program.outputs) {
    const bool has0 = c[out.zero] > 0;
    const bool has1 = c[out.one] > 0;
    if (has0 && has1) {
      d.error = "AMBIGUOUS(" + out.label + ")";
      d.bits.clear();
      return d;
    }
    if (!has0 && !has1) {
      d.error = "MISSING(" + out.label + ")";
      d.bits.clear();
      return d;
    }
    d.bits.push_back(has1);
  }
  return d;
}

std::string render(const RunResult& r, const Alphabet& alphabet) {
  std::ostringstream out;
  out << "output: " << (r.decoded.ok() ? format_bits(r.decoded.bits) : r.decoded.error) << '\n';
  out << "steps: " << r.step_count << '\n';
  out << "applications: " << r.applications << '\n';
  out << "peak_volume: " << r.peak_volume << '\n';
  for (std::size_t k = 0; k < r.per_step_terminal.size(); ++k)
    out << "terminal " << k << " (entry " << r.entry_volume[k] << "): " << r.per_step_terminal[k].to_string(alphabet)
        << '\n';
  out << "final: " << r.final.to_string(alphabet) << '\n';
  for (const auto& line : r.trace)
    out << line << '\n';
  return out.str();
}

TerminalSet enumerate_terminals(const Configuration& start, const std::vector<Rule>& rules, std::size_t state_cap) {
  TerminalSet terminals;
  std::unordered_set<std::vector<Count>, CountsHash> seen;
  std::vector<Configuration> stack{start};
  seen.insert(start.counts());
  while (!stack.empty()) {
    Configuration c = std::move(stack.back());
    stack.pop_back();
    bool any = false;
    for (const Rule& r : rules) {
      if (!applicable(c, r))
        continue;
      any = true;
      Configuration next = c;
      for (const auto& [s, d] : r.delta())
        next[s] = static_cast<Count>(static_cast<long long>(next[s]) + d);
      if (seen.insert(next.counts()).second) {
        if (seen.size() > state_cap)
          throw CapacityError("exhaustive search exceeded " + std::to_string(state_cap) +
                              " configurations; instance too large for exhaustive mode");
        stack.push_back(std::move(next));
      }
    }
    if (!any)
      terminals.insert(std::move(c));
  }
  return terminals;
}

ProgramTerminals enumerate_program_terminals(const StepProgram& program, const std::vector<bool>& bits,
                                             Count volume_cap, std::size_t state_cap) {
  ProgramTerminals out;
  TerminalSet frontier{Configuration(program.alphabet.size())};
  for (std::size_t k = 0; k < program.steps.size(); ++k) {
    const std::vector<Term> add = k == 0 ? program.initial_additions(bits) : program.steps[k];
    TerminalSet next;
    for (const Configuration& f : frontier) {
      Configuration entry = f;
      entry.add(add);
      const Count v = entry.volume();
      out.max_entry_volume = std::max(out.max_entry_volume, v);
      if (v > volume_cap) {
        out.skipped = true;
        return out;
      }
      TerminalSet t = enumerate_terminals(entry, program.rules, state_cap);
      out.explored += t.size();
      next.merge(t);
    }
    frontier = std::move(next);
  }
  out.terminals = std::move(frontier);
  return out;
}

} // namespace stepcrn
