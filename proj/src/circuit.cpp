#include "stepcrn/circuit.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace stepcrn {

namespace {

constexpr std::array<std::pair<GateKind, std::string_view>, 7> kKindNames{{
    {GateKind::Input, "INPUT"},
    {GateKind::ConstZero, "CONST_ZERO"},
    {GateKind::ConstOne, "CONST_ONE"},
    {GateKind::And, "AND"},
    {GateKind::Or, "OR"},
    {GateKind::Not, "NOT"},
    {GateKind::Maj, "MAJ"},
}};

std::string gate_label(GateId id) { return "gate " + std::to_string(id); }

} // namespace

std::string_view to_string(GateKind kind) {
  for (const auto& [k, name] : kKindNames)
    if (k == kind)
      return name;
  return "?";
}

std::optional<GateKind> parse_gate_kind(std::string_view token) {
  std::string upper(token);
  std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
  for (const auto& [k, name] : kKindNames)
    if (upper == name)
      return k;
  return std::nullopt;
}

bool is_source(GateKind kind) {
  return kind == GateKind::Input || kind == GateKind::ConstZero || kind == GateKind::ConstOne;
}

Circuit::Circuit(std::string name, std::vector<Gate> gates, std::vector<GateId> outputs)
    : name_(std::move(name)), gates_(std::move(gates)), outputs_(std::move(outputs)) {
  const std::size_t n = gates_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Gate& g = gates_[i];
    if (g.id == 0)
      throw ValidationError("gate ids must be positive");
    if (!position_.emplace(g.id, i).second)
      throw ValidationError("duplicate " + gate_label(g.id));
    max_id_ = std::max(max_id_, g.id);
    if (g.kind == GateKind::Input)
      inputs_.push_back(g.id);
  }

  for (const Gate& g : gates_) {
    if (is_source(g.kind) && !g.inputs.empty())
      throw ValidationError(gate_label(g.id) + ": " + std::string(to_string(g.kind)) + " takes no inputs");
    if (g.kind == GateKind::Not && g.inputs.size() != 1)
      throw ValidationError(gate_label(g.id) + ": NOT fan-in must be 1, got " + std::to_string(g.inputs.size()));
    if (!is_source(g.kind) && g.inputs.empty())
      throw ValidationError(gate_label(g.id) + ": " + std::string(to_string(g.kind)) + " needs at least one input");
    for (GateId in : g.inputs)
      if (!position_.count(in))
        throw ValidationError(gate_label(g.id) + ": dangling reference to gate " + std::to_string(in));
  }

  if (outputs_.empty())
    throw ValidationError("circuit has no outputs");
  output_flag_.assign(n, false);
  for (GateId o : outputs_) {
    if (!position_.count(o))
      throw ValidationError("output references unknown gate " + std::to_string(o));
    if (output_flag_[position_.at(o)])
      throw ValidationError("gate " + std::to_string(o) + " listed as output twice");
    output_flag_[position_.at(o)] = true;
  }

  // Kahn's algorithm; ties broken by declaration order so the order is stable.
  consumers_.assign(n, {});
  std::vector<std::size_t> pending(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    pending[i] = gates_[i].inputs.size();
    for (GateId in : gates_[i].inputs)
      consumers_[position_.at(in)].push_back(gates_[i].id);
  }
  std::set<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (pending[i] == 0)
      ready.insert(i);
  depth_.assign(n, 0);
  while (!ready.empty()) {
    const std::size_t i = *ready.begin();
    ready.erase(ready.begin());
    topo_.push_back(gates_[i].id);
    for (GateId c : consumers_[i]) {
      const std::size_t ci = position_.at(c);
      depth_[ci] = std::max(depth_[ci], depth_[i] + 1);
      if (--pending[ci] == 0)
        ready.insert(ci);
    }
  }
  if (topo_.size() != n) {
    for (std::size_t i = 0; i < n; ++i)
      if (pending[i] != 0)
        throw ValidationError("cycle detected through " + gate_label(gates_[i].id));
  }

  // Every gate must feed some output; otherwise its demand would be zero.
  std::vector<bool> live(n, false);
  for (auto it = topo_.rbegin(); it != topo_.rend(); ++it) {
    const std::size_t i = position_.at(*it);
    bool l = output_flag_[i];
    for (GateId c : consumers_[i])
      l = l || live[position_.at(c)];
    live[i] = l;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!live[i])
      throw ValidationError(gate_label(gates_[i].id) + " does not reach any output");

  for (const Gate& g : gates_) {
    std::map<GateId, std::size_t> seen;
    for (GateId in : g.inputs)
      wires_.push_back(Wire{0, in, g.id, seen[in]++});
  }
  std::sort(wires_.begin(), wires_.end(), [](const Wire& a, const Wire& b) {
    return std::tie(a.producer, a.consumer, a.slot) < std::tie(b.producer, b.consumer, b.slot);
  });
  for (std::size_t i = 0; i < wires_.size(); ++i)
    wires_[i].index = i + 1;
}

std::size_t Circuit::pos(GateId id) const {
  auto it = position_.find(id);
  if (it == position_.end())
    throw ValidationError("unknown gate " + std::to_string(id));
  return it->second;
}

const Gate& Circuit::gate(GateId id) const { return gates_[pos(id)]; }

const std::vector<GateId>& Circuit::consumers(GateId id) const { return consumers_[pos(id)]; }

bool Circuit::is_output(GateId id) const { return output_flag_[pos(id)]; }

std::size_t Circuit::depth(GateId id) const { return depth_[pos(id)]; }

std::size_t Circuit::wire_index(GateId producer, GateId consumer, std::size_t slot) const {
  auto it = std::lower_bound(wires_.begin(), wires_.end(), std::tie(producer, consumer, slot),
                             [](const Wire& w, const auto& key) {
                               return std::tie(w.producer, w.consumer, w.slot) < key;
                             });
  if (it == wires_.end() || it->producer != producer || it->consumer != consumer || it->slot != slot)
    throw ValidationError("no wire " + std::to_string(producer) + " -> " + std::to_string(consumer));
  return it->index;
}

bool Circuit::is_formula() const {
  if (outputs_.size() != 1)
    return false;
  for (std::size_t i = 0; i < gates_.size(); ++i) {
    if (is_source(gates_[i].kind))
      continue;
    if (consumers_[i].size() + (output_flag_[i] ? 1 : 0) != 1)
      return false;
  }
  return true;
}

CircuitStats stats(const Circuit& circuit) {
  CircuitStats s;
  std::map<std::size_t, std::size_t> per_level;
  for (const Gate& g : circuit.gates()) {
    s.fan_out = std::max(s.fan_out, circuit.fan_out(g.id) + (circuit.is_output(g.id) ? 1 : 0));
    if (is_source(g.kind)) {
      ++s.sources;
      continue;
    }
    ++s.gates;
    const std::size_t d = circuit.depth(g.id);
    s.depth = std::max(s.depth, d);
    s.width = std::max(s.width, ++per_level[d]);
  }
  s.formula = circuit.is_formula();
  return s;
}

std::vector<bool> evaluate(const Circuit& circuit, const std::vector<bool>& inputs) {
  const auto& in_ids = circuit.inputs();
  if (inputs.size() != in_ids.size())
    throw ValidationError("assignment has " + std::to_string(inputs.size()) + " bits, circuit has " +
                          std::to_string(in_ids.size()) + " inputs");
  std::unordered_map<GateId, bool> value;
  for (std::size_t i = 0; i < in_ids.size(); ++i)
    value[in_ids[i]] = inputs[i];

  for (GateId id : circuit.topological_order()) {
    const Gate& g = circuit.gate(id);
    std::size_t ones = 0;
    for (GateId in : g.inputs)
      ones += value.at(in) ? 1 : 0;
    const std::size_t n = g.inputs.size();
    switch (g.kind) {
    case GateKind::Input:
      break;
    case GateKind::ConstZero:
      value[id] = false;
      break;
    case GateKind::ConstOne:
      value[id] = true;
      break;
    case GateKind::And:
      value[id] = ones == n;
      break;
    case GateKind::Or:
      value[id] = ones > 0;
      break;
    case GateKind::Not:
      value[id] = ones == 0;
      break;
    case GateKind::Maj: {
      const std::size_t padded = n % 2 == 0 ? n + 1 : n; // padding input is 0
      value[id] = 2 * ones > padded;
      break;
    }
    }
  }

  std::vector<bool> out;
  out.reserve(circuit.outputs().size());
  for (GateId o : circuit.outputs())
    out.push_back(value.at(o));
  return out;
}

DemandMap demand_analysis(const Circuit& circuit) {
  DemandMap demand;
  const auto& order = circuit.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const GateId id = *it;
    Count d = circuit.is_output(id) ? 1 : 0;
    for (GateId c : circuit.consumers(id))
      if (!checked_add(d, demand.at(c), d))
        throw OverflowError("demand exceeds count capacity", id);
    demand[id] = d;
  }
  return demand;
}

} // namespace stepcrn
