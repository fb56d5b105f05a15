#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "stepcrn/circuit.hpp"
#include "stepcrn/program.hpp"

namespace stepcrn {

enum class Backend { Formula, Exp, Catalyst };
std::string_view to_string(Backend backend);
std::optional<Backend> parse_backend(std::string_view name);

// Canonical species names.
std::string x_species(GateId i, bool value);
std::string y_species(GateId i, bool value);
std::string wire_species(GateId from, GateId to, bool value); // y[from->to]
std::string a_species(GateId i, bool value);
std::string b_species(GateId i, bool value);

struct NamedTerm {
  std::string species;
  Count count = 0;
  friend bool operator==(const NamedTerm&, const NamedTerm&) = default;
};

struct NamedRule {
  std::vector<std::string> reactants;
  std::vector<std::string> products;
  friend bool operator==(const NamedRule&, const NamedRule&) = default;
};

struct GateLowering {
  std::vector<std::vector<NamedTerm>> additions; // one entry per step used
  std::vector<NamedRule> rules;
  std::size_t steps_used() const { return additions.size(); }
};

/// Per-gate rule tables. `fan_in` lists producers once per wire (duplicates allowed).
/// Every addition is scaled by m. For MAJ, producers in `captured` have output copies
/// shared with other consumers; their votes are taken through dedicated y[j->i]
/// species instead of the a[i] pool so the pool cannot drain copies owed elsewhere.
GateLowering lower_gate(GateKind kind, GateId i, const std::vector<GateId>& fan_in, Count m,
                        const std::set<GateId>& captured = {});

/// Output-to-input conversion for gate i (x[i] copies scaled by m). With `catalytic`
/// the surviving output species act as catalysts instead of being consumed.
GateLowering lower_convert(GateKind kind, GateId i, const std::vector<GateId>& fan_in, Count m,
                           bool catalytic = false);

struct ResourceBounds {
  Count species = 0;
  Count steps = 0;
  Count volume = 0; // formula: peak; exp: static volume; catalyst: per-level resident volume
  std::string volume_kind;
};

struct CompilationReport {
  Backend backend = Backend::Formula;
  std::string circuit_name;
  CircuitStats stats;           // of the circuit as given
  std::size_t compiled_gates = 0; // total gates after level normalization
  std::size_t compiled_width = 0; // most gates, sources included, on one level after normalization
  std::size_t buffers_inserted = 0;
  std::size_t species_count = 0;
  std::size_t rule_count = 0;
  std::size_t step_count = 0;
  Count static_volume = 0; // all additions plus the larger encoding of every input
  Count input_multiplicity = 0; // largest per-input encoding count
  ResourceBounds bounds;
  DemandMap demand;
  std::map<GateId, std::size_t> completion_step; // step after which the gate's output species are final
  std::vector<std::string> step_roles;           // e.g. "convert 0", "gates 1", "maj 1.2", "dx 2"
  std::vector<std::size_t> step_level;           // depth level each step belongs to
};

std::string to_key_value(const CompilationReport& report);
std::string to_json(const CompilationReport& report);

struct Compilation {
  StepProgram program;
  CompilationReport report;
  Circuit circuit; // the circuit actually lowered (after any normalization)
};

/// Throws ValidationError if the circuit is not a formula.
Compilation compile_formula(const Circuit& circuit);
/// Throws OverflowError naming the gate whose demand-scaled counts do not fit.
Compilation compile_circuit_exp(const Circuit& circuit);
Compilation compile_circuit_catalyst(const Circuit& circuit);
Compilation compile(const Circuit& circuit, Backend backend);

/// Inserts fan-in-1 OR buffers so every wire spans exactly one depth level and every
/// output sits at the maximum depth. Buffer ids start above the largest existing id.
/// Output labels are preserved through `output_labels`.
struct Normalized {
  Circuit circuit;
  std::vector<GateId> output_labels; // original output ids, aligned with circuit.outputs()
  std::size_t buffers = 0;
};
Normalized normalize_levels(const Circuit& circuit);

/// Species merged into s_0 for the given bits.
std::vector<Term> encode_input(const StepProgram& program, const std::vector<bool>& bits);

struct Analysis {
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};

/// Static checks on a compiled program: rule purity for the backend, every
/// non-deleter species injected in at most one step, and rule reactants that
/// only pair a gate's own species with each other or with its inputs' x species.
Analysis analyze(const Compilation& compilation);

/// Per-level maximum of terminal volumes for a run, indexed by level (catalyst layout).
std::vector<Count> resident_volume_by_level(const CompilationReport& report, const std::vector<Count>& terminal_volumes);

} // namespace stepcrn
