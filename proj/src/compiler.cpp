#include "stepcrn/compiler.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

namespace stepcrn {

std::string_view to_string(Backend backend) {
  switch (backend) {
  case Backend::Formula:
    return "formula";
  case Backend::Exp:
    return "exp";
  case Backend::Catalyst:
    return "catalyst";
  }
  return "?";
}

std::optional<Backend> parse_backend(std::string_view name) {
  for (Backend b : {Backend::Formula, Backend::Exp, Backend::Catalyst})
    if (name == to_string(b))
      return b;
  return std::nullopt;
}

namespace {

Count saturating_mul(Count a, Count b) {
  Count out = 0;
  return checked_mul(a, b, out) ? out : ~Count{0};
}

Count saturating_pow(Count base, std::size_t exp) {
  Count out = 1;
  for (std::size_t k = 0; k < exp; ++k)
    out = saturating_mul(out, base);
  return out;
}

class Builder {
public:
  std::size_t new_step(std::string role, std::size_t level) {
    steps_.emplace_back();
    roles_.push_back(std::move(role));
    levels_.push_back(level);
    return steps_.size() - 1;
  }

  SpeciesId species(const std::string& name) { return program_.alphabet.intern(name); }

  void add(std::size_t step, const NamedTerm& t, GateId owner) {
    Count& slot = steps_.at(step)[species(t.species)];
    if (!checked_add(slot, t.count, slot))
      throw OverflowError("species count exceeds count capacity", owner);
  }

  void rule(const NamedRule& r) {
    std::vector<Term> lhs, rhs;
    for (const auto& s : r.reactants)
      lhs.push_back({species(s), 1});
    for (const auto& s : r.products)
      rhs.push_back({species(s), 1});
    Rule built(std::move(lhs), std::move(rhs));
    if (seen_.insert(built.to_string(program_.alphabet)).second)
      program_.rules.push_back(std::move(built));
  }

  void lowering(std::size_t first_step, const GateLowering& g, GateId owner) {
    for (std::size_t k = 0; k < g.additions.size(); ++k)
      for (const auto& t : g.additions[k])
        add(first_step + k, t, owner);
    for (const auto& r : g.rules)
      rule(r);
  }

  StepProgram& program() { return program_; }
  const std::vector<std::string>& roles() const { return roles_; }
  const std::vector<std::size_t>& levels() const { return levels_; }

  StepProgram finish() {
    for (const auto& s : steps_) {
      std::vector<Term> add;
      for (const auto& [sp, c] : s)
        add.push_back({sp, c});
      program_.steps.push_back(std::move(add));
    }
    program_.validate();
    return std::move(program_);
  }

private:
  StepProgram program_;
  std::vector<std::map<SpeciesId, Count>> steps_;
  std::vector<std::string> roles_;
  std::vector<std::size_t> levels_;
  std::unordered_set<std::string> seen_;
};

// Gates grouped by depth, declaration order within a level.
std::vector<std::vector<GateId>> levels_of(const Circuit& c, std::size_t depth) {
  std::vector<std::vector<GateId>> out(depth + 1);
  for (const Gate& g : c.gates())
    out[c.depth(g.id)].push_back(g.id);
  return out;
}

std::size_t max_depth(const Circuit& c) {
  std::size_t d = 0;
  for (const Gate& g : c.gates())
    d = std::max(d, c.depth(g.id));
  return d;
}

Count slots(const Gate& g, GateId producer) {
  return static_cast<Count>(std::count(g.inputs.begin(), g.inputs.end(), producer));
}

// Producers whose x copies are not all owed to this consumer.
std::set<GateId> captured_inputs(const Gate& g, Count m, const std::map<GateId, Count>& copies) {
  std::set<GateId> out;
  for (GateId j : g.inputs) {
    Count owed = 0;
    if (!checked_mul(slots(g, j), m, owed) || copies.at(j) != owed)
      out.insert(j);
  }
  return out;
}

void fill_common_report(CompilationReport& r, Backend backend, const Circuit& original, const StepProgram& p,
                        const Builder& b) {
  r.backend = backend;
  r.circuit_name = original.name();
  r.stats = stats(original);
  r.species_count = p.alphabet.size();
  r.rule_count = p.rules.size();
  r.step_count = p.steps.size();
  r.step_roles = b.roles();
  r.step_level = b.levels();
  Count total = 0;
  for (const auto& s : p.steps)
    for (const Term& t : s)
      total = checked_add(total, t.count, total) ? total : ~Count{0};
  for (const auto& in : p.inputs) {
    const Count c = std::max(in.zero.count, in.one.count);
    r.input_multiplicity = std::max(r.input_multiplicity, c);
    total = checked_add(total, c, total) ? total : ~Count{0};
  }
  r.static_volume = total;
}

// Shared layout of the formula and exponential-volume backends:
// s_0 converts sources, then per level the gate step(s) and a conversion step.
Compilation compile_demand_scaled(const Circuit& circuit, Backend backend) {
  const DemandMap demand = demand_analysis(circuit);
  const std::size_t depth = max_depth(circuit);
  const auto levels = levels_of(circuit, depth);
  Builder b;
  CompilationReport report;
  std::map<GateId, Count> copies(demand.begin(), demand.end());

  auto convert_step = [&](std::size_t level) {
    const std::size_t s = b.new_step("convert " + std::to_string(level), level);
    for (GateId g : levels[level]) {
      const Gate& gate = circuit.gate(g);
      b.lowering(s, lower_convert(gate.kind, g, gate.inputs, demand.at(g)), g);
    }
    return s;
  };

  const std::size_t s0 = convert_step(0);
  for (GateId g : levels[0]) {
    const Gate& gate = circuit.gate(g);
    report.completion_step[g] = s0;
    if (gate.kind == GateKind::ConstZero || gate.kind == GateKind::ConstOne)
      b.add(s0, {y_species(g, gate.kind == GateKind::ConstOne), demand.at(g)}, g);
  }

  for (std::size_t level = 1; level <= depth; ++level) {
    const bool has_maj = std::any_of(levels[level].begin(), levels[level].end(),
                                     [&](GateId g) { return circuit.gate(g).kind == GateKind::Maj; });
    std::size_t first = 0;
    if (has_maj) {
      first = b.new_step("maj " + std::to_string(level) + ".1", level);
      b.new_step("maj " + std::to_string(level) + ".2", level);
      b.new_step("maj " + std::to_string(level) + ".3", level);
    } else {
      first = b.new_step("gates " + std::to_string(level), level);
    }
    for (GateId g : levels[level]) {
      const Gate& gate = circuit.gate(g);
      const Count m = demand.at(g);
      const auto lowering = lower_gate(gate.kind, g, gate.inputs, m, captured_inputs(gate, m, copies));
      b.lowering(first, lowering, g);
      report.completion_step[g] = first + lowering.steps_used() - 1;
    }
    convert_step(level);
  }

  for (GateId in : circuit.inputs())
    b.program().inputs.push_back({std::to_string(in), {b.species(y_species(in, false)), demand.at(in)},
                                  {b.species(y_species(in, true)), demand.at(in)}});
  for (GateId o : circuit.outputs())
    b.program().outputs.push_back({std::to_string(o), b.species(x_species(o, false)), b.species(x_species(o, true))});

  StepProgram program = b.finish();
  fill_common_report(report, backend, circuit, program, b);
  report.demand = demand;
  report.compiled_gates = circuit.gates().size();
  {
    std::size_t w = 0;
    for (const auto& l : levels)
      w = std::max(w, l.size());
    report.compiled_width = w;
  }
  const Count g_total = report.stats.total_gates();
  report.bounds.species = 8 * g_total;
  report.bounds.steps = 4 * static_cast<Count>(report.stats.depth) + 2;
  if (backend == Backend::Formula) {
    report.bounds.volume = 8 * g_total;
    report.bounds.volume_kind = "peak";
  } else {
    report.bounds.volume = saturating_mul(8 * g_total, saturating_pow(report.stats.fan_out, report.stats.depth));
    report.bounds.volume_kind = "static";
  }
  return Compilation{std::move(program), std::move(report), circuit};
}

} // namespace

Normalized normalize_levels(const Circuit& circuit) {
  const std::size_t depth = max_depth(circuit);
  std::vector<Gate> gates = circuit.gates();
  std::map<GateId, std::vector<GateId>> chains;
  GateId next = circuit.max_id();
  std::size_t buffers = 0;

  // The gate standing for `j` at depth `level`, extending j's buffer chain as needed.
  auto tap = [&](GateId j, std::size_t level) -> GateId {
    const std::size_t base = circuit.depth(j);
    if (level == base)
      return j;
    auto& chain = chains[j];
    while (chain.size() < level - base) {
      const GateId prev = chain.empty() ? j : chain.back();
      if (next == ~GateId{0})
        throw ValidationError("no gate ids left for level buffers");
      gates.push_back(Gate{++next, GateKind::Or, {prev}});
      chain.push_back(next);
      ++buffers;
    }
    return chain[level - base - 1];
  };

  for (std::size_t k = 0; k < circuit.gates().size(); ++k) {
    Gate& g = gates[k];
    if (is_source(g.kind))
      continue;
    const std::size_t d = circuit.depth(g.id);
    for (GateId& in : g.inputs)
      in = tap(in, d - 1);
  }
  std::vector<GateId> outputs;
  for (GateId o : circuit.outputs())
    outputs.push_back(tap(o, depth));
  return Normalized{Circuit(circuit.name(), std::move(gates), std::move(outputs)), circuit.outputs(), buffers};
}

Compilation compile_formula(const Circuit& circuit) {
  if (!circuit.is_formula())
    throw ValidationError("circuit '" + circuit.name() +
                          "' is not a formula (needs one output and fan-out 1 on every non-source gate)");
  return compile_demand_scaled(circuit, Backend::Formula);
}

Compilation compile_circuit_exp(const Circuit& circuit) { return compile_demand_scaled(circuit, Backend::Exp); }

Compilation compile_circuit_catalyst(const Circuit& original) {
  Normalized norm = normalize_levels(original);
  const Circuit& circuit = norm.circuit;
  const std::size_t depth = max_depth(circuit);
  const auto levels = levels_of(circuit, depth);
  Builder b;
  CompilationReport report;

  std::map<GateId, Count> copies;
  for (const Gate& g : circuit.gates())
    copies[g.id] = circuit.fan_out(g.id) + (circuit.is_output(g.id) ? 1 : 0);

  // Clear previous inputs and helpers, then convert level `prev` outputs, then clear outputs.
  auto fan_out_block = [&](std::size_t prev, std::size_t level) {
    const std::string tag = std::to_string(prev);
    const std::size_t first = b.new_step("dx " + tag, level);
    b.add(first, {"dx", 1}, 0);
    b.add(b.new_step("dx-clear " + tag, level), {"dx", 1}, 0);
    const std::size_t conv = b.new_step("convert " + tag, level);
    for (GateId g : levels[prev]) {
      const Gate& gate = circuit.gate(g);
      b.lowering(conv, lower_convert(gate.kind, g, gate.inputs, copies.at(g), true), g);
    }
    b.add(b.new_step("dy " + tag, level), {"dy", 1}, 0);
    b.add(b.new_step("dy-clear " + tag, level), {"dy", 1}, 0);
    return first;
  };

  for (std::size_t level = 1; level <= depth + 1; ++level) {
    const std::size_t first = fan_out_block(level - 1, level);
    if (level == 1)
      for (GateId g : levels[0]) {
        const Gate& gate = circuit.gate(g);
        report.completion_step[g] = first;
        if (gate.kind == GateKind::ConstZero || gate.kind == GateKind::ConstOne)
          b.add(first, {y_species(g, gate.kind == GateKind::ConstOne), 1}, g);
      }
    if (level > depth)
      break;
    const bool has_maj = std::any_of(levels[level].begin(), levels[level].end(),
                                     [&](GateId g) { return circuit.gate(g).kind == GateKind::Maj; });
    std::size_t gate_first = 0;
    if (has_maj) {
      gate_first = b.new_step("maj " + std::to_string(level) + ".1", level);
      b.new_step("maj " + std::to_string(level) + ".2", level);
      b.new_step("maj " + std::to_string(level) + ".3", level);
    } else {
      gate_first = b.new_step("gates " + std::to_string(level), level);
    }
    for (GateId g : levels[level]) {
      const Gate& gate = circuit.gate(g);
      const auto lowering = lower_gate(gate.kind, g, gate.inputs, 1, captured_inputs(gate, 1, copies));
      b.lowering(gate_first, lowering, g);
      report.completion_step[g] = gate_first + lowering.steps_used() - 1;
    }
  }

  // Deleter rules over every species that exists.
  {
    StepProgram& p = b.program();
    const std::vector<std::string> names = p.alphabet.names();
    for (const auto& n : names) {
      if (n == "dx" || n == "dy")
        continue;
      const char head = n.front();
      if (head == 'x' || head == 'a' || head == 'b')
        b.rule({{"dx", n}, {"dx"}});
      else if (head == 'y')
        b.rule({{"dy", n}, {"dy"}});
    }
    b.rule({{"dx", "dx"}, {}});
    b.rule({{"dy", "dy"}, {}});
  }

  for (GateId in : circuit.inputs())
    b.program().inputs.push_back(
        {std::to_string(in), {b.species(y_species(in, false)), 1}, {b.species(y_species(in, true)), 1}});
  for (std::size_t k = 0; k < circuit.outputs().size(); ++k) {
    const GateId o = circuit.outputs()[k];
    b.program().outputs.push_back(
        {std::to_string(norm.output_labels[k]), b.species(x_species(o, false)), b.species(x_species(o, true))});
  }

  StepProgram program = b.finish();
  fill_common_report(report, Backend::Catalyst, original, program, b);
  for (const auto& [g, c] : copies)
    report.demand[g] = c;
  report.compiled_gates = circuit.gates().size();
  report.buffers_inserted = norm.buffers;
  for (const auto& l : levels)
    report.compiled_width = std::max(report.compiled_width, l.size());
  report.bounds.species = 8 * static_cast<Count>(report.compiled_gates) + 2;
  report.bounds.steps = 8 * static_cast<Count>(depth) + 5;
  report.bounds.volume = 8 * static_cast<Count>(report.compiled_width);
  report.bounds.volume_kind = "resident";
  return Compilation{std::move(program), std::move(report), std::move(norm.circuit)};
}

Compilation compile(const Circuit& circuit, Backend backend) {
  switch (backend) {
  case Backend::Formula:
    return compile_formula(circuit);
  case Backend::Exp:
    return compile_circuit_exp(circuit);
  case Backend::Catalyst:
    break;
  }
  return compile_circuit_catalyst(circuit);
}

std::vector<Term> encode_input(const StepProgram& program, const std::vector<bool>& bits) {
  if (bits.size() != program.inputs.size())
    throw ValidationError("expected " + std::to_string(program.inputs.size()) + " input bits, got " +
                          std::to_string(bits.size()));
  std::vector<Term> out;
  for (std::size_t i = 0; i < bits.size(); ++i)
    out.push_back(bits[i] ? program.inputs[i].one : program.inputs[i].zero);
  return out;
}

std::vector<Count> resident_volume_by_level(const CompilationReport& report,
                                            const std::vector<Count>& terminal_volumes) {
  std::vector<Count> out;
  for (std::size_t k = 0; k < terminal_volumes.size() && k < report.step_level.size(); ++k) {
    const std::size_t level = report.step_level[k];
    if (out.size() <= level)
      out.resize(level + 1, 0);
    out[level] = std::max(out[level], terminal_volumes[k]);
  }
  return out;
}

std::string to_key_value(const CompilationReport& r) {
  std::ostringstream out;
  out << "backend=" << to_string(r.backend) << '\n'
      << "circuit=" << r.circuit_name << '\n'
      << "G=" << r.stats.gates << '\n'
      << "sources=" << r.stats.sources << '\n'
      << "D=" << r.stats.depth << '\n'
      << "F_out=" << r.stats.fan_out << '\n'
      << "W=" << r.stats.width << '\n'
      << "formula=" << (r.stats.formula ? "true" : "false") << '\n'
      << "compiled_gates=" << r.compiled_gates << '\n'
      << "compiled_width=" << r.compiled_width << '\n'
      << "buffers_inserted=" << r.buffers_inserted << '\n'
      << "species=" << r.species_count << '\n'
      << "rules=" << r.rule_count << '\n'
      << "steps=" << r.step_count << '\n'
      << "static_volume=" << r.static_volume << '\n'
      << "input_multiplicity=" << r.input_multiplicity << '\n'
      << "bound.species=" << r.bounds.species << '\n'
      << "bound.steps=" << r.bounds.steps << '\n'
      << "bound.volume=" << r.bounds.volume << '\n'
      << "bound.volume_kind=" << r.bounds.volume_kind << '\n';
  for (const auto& [g, d] : r.demand)
    out << "demand." << g << '=' << d << '\n';
  for (const auto& [g, s] : r.completion_step)
    out << "complete." << g << '=' << s << '\n';
  for (std::size_t k = 0; k < r.step_roles.size(); ++k)
    out << "step." << k << '=' << r.step_roles[k] << " (level " << r.step_level[k] << ")\n";
  return out.str();
}

std::string to_json(const CompilationReport& r) {
  nlohmann::ordered_json j;
  j["backend"] = std::string(to_string(r.backend));
  j["circuit"] = r.circuit_name;
  j["stats"] = {{"G", r.stats.gates},       {"sources", r.stats.sources}, {"D", r.stats.depth},
                {"F_out", r.stats.fan_out}, {"W", r.stats.width},         {"formula", r.stats.formula}};
  j["compiled_gates"] = r.compiled_gates;
  j["compiled_width"] = r.compiled_width;
  j["buffers_inserted"] = r.buffers_inserted;
  j["species"] = r.species_count;
  j["rules"] = r.rule_count;
  j["steps"] = r.step_count;
  j["static_volume"] = r.static_volume;
  j["input_multiplicity"] = r.input_multiplicity;
  j["bounds"] = {{"species", r.bounds.species},
                 {"steps", r.bounds.steps},
                 {"volume", r.bounds.volume},
                 {"volume_kind", r.bounds.volume_kind}};
  nlohmann::ordered_json demand = nlohmann::ordered_json::object();
  for (const auto& [g, d] : r.demand)
    demand[std::to_string(g)] = d;
  j["demand"] = demand;
  nlohmann::ordered_json complete = nlohmann::ordered_json::object();
  for (const auto& [g, s] : r.completion_step)
    complete[std::to_string(g)] = s;
  j["completion_step"] = complete;
  nlohmann::ordered_json steps = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < r.step_roles.size(); ++k)
    steps.push_back({{"role", r.step_roles[k]}, {"level", r.step_level[k]}});
  j["step_roles"] = steps;
  return j.dump(2) + "\n";
}

} // namespace stepcrn
