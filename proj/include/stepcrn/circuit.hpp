#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "stepcrn/common.hpp"

namespace stepcrn {

enum class GateKind { Input, ConstZero, ConstOne, And, Or, Not, Maj };

std::string_view to_string(GateKind kind);
std::optional<GateKind> parse_gate_kind(std::string_view token);
bool is_source(GateKind kind);

struct Gate {
  GateId id = 0;
  GateKind kind = GateKind::Input;
  std::vector<GateId> inputs;
};

/// A producer -> consumer edge. Duplicate edges between the same pair are
/// distinguished by slot (0, 1, ... in the consumer's input order).
struct Wire {
  std::size_t index = 0; // 1-based, lexicographic in (producer, consumer, slot)
  GateId producer = 0;
  GateId consumer = 0;
  std::size_t slot = 0;
};

/// Validated threshold circuit. Immutable after construction.
class Circuit {
public:
  /// Throws ValidationError on duplicate ids, dangling references, cycles,
  /// arity violations, empty/unknown outputs, or gates that reach no output.
  Circuit(std::string name, std::vector<Gate> gates, std::vector<GateId> outputs);

  const std::string& name() const { return name_; }
  const std::vector<Gate>& gates() const { return gates_; }
  const std::vector<GateId>& outputs() const { return outputs_; }

  bool contains(GateId id) const { return position_.count(id) != 0; }
  const Gate& gate(GateId id) const;
  GateId max_id() const { return max_id_; }

  /// INPUT gates in declaration order; bit i of an assignment feeds inputs()[i].
  const std::vector<GateId>& inputs() const { return inputs_; }

  /// Gate ids, every gate after all of its inputs.
  const std::vector<GateId>& topological_order() const { return topo_; }

  const std::vector<Wire>& wires() const { return wires_; }
  std::size_t wire_index(GateId producer, GateId consumer, std::size_t slot = 0) const;

  /// Consumers of `id`, once per outgoing wire.
  const std::vector<GateId>& consumers(GateId id) const;
  std::size_t fan_out(GateId id) const { return consumers(id).size(); }
  bool is_output(GateId id) const;

  /// Longest path (in edges) from a source gate; sources are at depth 0.
  std::size_t depth(GateId id) const;

  /// Single output, and every non-source gate has exactly one outgoing edge
  /// (the output's designation counts as its edge). Sources may fan out.
  bool is_formula() const;

private:
  std::size_t pos(GateId id) const;

  std::string name_;
  std::vector<Gate> gates_;
  std::vector<GateId> outputs_;
  std::unordered_map<GateId, std::size_t> position_;
  std::vector<GateId> inputs_;
  std::vector<GateId> topo_;
  std::vector<std::vector<GateId>> consumers_;
  std::vector<std::size_t> depth_;
  std::vector<bool> output_flag_;
  std::vector<Wire> wires_;
  GateId max_id_ = 0;
};

struct CircuitStats {
  std::size_t gates = 0;   // G: non-source gates
  std::size_t sources = 0; // INPUT and CONST gates
  std::size_t depth = 0;   // D
  std::size_t fan_out = 0; // F_out, over all gates, output designation counted as an edge
  std::size_t width = 0;   // W: most non-source gates on one depth level
  bool formula = false;

  /// Gate count including sources; resource bounds are stated against this.
  std::size_t total_gates() const { return gates + sources; }
};

CircuitStats stats(const Circuit& circuit);

/// Reference evaluator. MAJ with even fan-in gets one extra constant-0 input,
/// matching the compiled majority lowering.
std::vector<bool> evaluate(const Circuit& circuit, const std::vector<bool>& inputs);

/// Output-species copies each gate must produce: 1 per output designation plus
/// the demand of every consumer wire (= number of paths to output designations).
using DemandMap = std::map<GateId, Count>;
DemandMap demand_analysis(const Circuit& circuit);

/// Parses the line-oriented netlist or its JSON form (detected by a leading '{').
Circuit parse_circuit(std::string_view text);
std::string to_netlist(const Circuit& circuit);
std::string to_json(const Circuit& circuit);

} // namespace stepcrn
