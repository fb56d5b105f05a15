#include "stepcrn/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <fstream>
#include <random>

namespace stepcrn {

namespace {

constexpr int kAttempts = 10000;

std::size_t pick(std::mt19937_64& rng, const Range& r) {
  return std::uniform_int_distribution<std::size_t>(r.min, r.max)(rng);
}

bool chance(std::mt19937_64& rng, double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; }

GateKind pick_kind(std::mt19937_64& rng, const CorpusSpec& spec) {
  if (chance(rng, spec.maj_fraction))
    return GateKind::Maj;
  if (chance(rng, spec.not_fraction))
    return GateKind::Not;
  return chance(rng, 0.5) ? GateKind::And : GateKind::Or;
}

std::size_t pick_fan_in(std::mt19937_64& rng, const CorpusSpec& spec, GateKind kind) {
  return kind == GateKind::Not ? 1 : pick(rng, spec.fan_in);
}

// Tree grown from a spine of `depth` gates; leaves become inputs.
std::optional<Circuit> try_formula(std::mt19937_64& rng, const CorpusSpec& spec, const std::string& name) {
  const std::size_t depth = pick(rng, spec.depth);
  const std::size_t target = pick(rng, Range{std::max(spec.gates.min, depth), spec.gates.max});
  if (target < depth)
    return std::nullopt;

  struct Node {
    GateKind kind;
    std::vector<long> children; // >= 0 gate node, -1 leaf
  };
  struct Slot {
    std::size_t node, index, cap;
  };
  std::vector<Node> nodes;
  std::vector<Slot> open;

  auto make = [&](std::size_t cap, bool spine) {
    const GateKind kind = pick_kind(rng, spec);
    const std::size_t k = pick_fan_in(rng, spec, kind);
    nodes.push_back({kind, std::vector<long>(k, -1)});
    const std::size_t id = nodes.size() - 1;
    for (std::size_t s = spine ? 1 : 0; s < k; ++s)
      if (cap > 1)
        open.push_back({id, s, cap - 1});
    return id;
  };

  // Spine: node h has its child 0 at height h-1.
  std::size_t prev = make(depth, true);
  for (std::size_t h = depth - 1; h >= 1; --h) {
    const std::size_t n = make(h, true);
    nodes[prev].children[0] = static_cast<long>(n);
    prev = n;
  }
  while (nodes.size() < target && !open.empty()) {
    const std::size_t at = std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng);
    const Slot slot = open[at];
    open.erase(open.begin() + static_cast<long>(at));
    const std::size_t n = make(slot.cap, false);
    nodes[slot.node].children[slot.index] = static_cast<long>(n);
  }
  if (nodes.size() < spec.gates.min)
    return std::nullopt;

  std::size_t leaves = 0;
  for (const Node& n : nodes)
    leaves += static_cast<std::size_t>(std::count(n.children.begin(), n.children.end(), -1));
  const std::size_t inputs = std::min(pick(rng, spec.inputs), leaves);
  if (inputs < spec.inputs.min)
    return std::nullopt;

  std::vector<GateId> leaf_input(leaves);
  for (std::size_t k = 0; k < leaves; ++k)
    leaf_input[k] = k < inputs ? static_cast<GateId>(k + 1)
                               : static_cast<GateId>(std::uniform_int_distribution<std::size_t>(1, inputs)(rng));
  std::shuffle(leaf_input.begin(), leaf_input.end(), rng);

  std::vector<Gate> gates;
  for (std::size_t k = 1; k <= inputs; ++k)
    gates.push_back({static_cast<GateId>(k), GateKind::Input, {}});
  std::size_t next_leaf = 0;
  auto id_of = [&](std::size_t node) { return static_cast<GateId>(inputs + 1 + node); };
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    Gate g{id_of(k), nodes[k].kind, {}};
    for (long c : nodes[k].children)
      g.inputs.push_back(c < 0 ? leaf_input[next_leaf++] : id_of(static_cast<std::size_t>(c)));
    gates.push_back(std::move(g));
  }
  return Circuit(name, std::move(gates), {id_of(0)});
}

// Level-by-level DAG; every gate takes one input from the level just below.
std::optional<Circuit> try_circuit(std::mt19937_64& rng, const CorpusSpec& spec, const std::string& name) {
  const std::size_t depth = pick(rng, spec.depth);
  const std::size_t target = pick(rng, Range{std::max(spec.gates.min, depth), spec.gates.max});
  const std::size_t inputs = pick(rng, spec.inputs);
  if (target < depth)
    return std::nullopt;

  std::vector<std::size_t> width(depth + 1, 1);
  width[0] = inputs;
  for (std::size_t k = depth; k < target; ++k)
    ++width[std::uniform_int_distribution<std::size_t>(1, depth)(rng)];

  std::vector<Gate> gates;
  std::vector<std::vector<GateId>> at_level(depth + 1);
  std::map<GateId, std::size_t> used;
  std::map<GateId, std::size_t> level_of;
  GateId next = 0;
  for (std::size_t k = 0; k < inputs; ++k) {
    gates.push_back({++next, GateKind::Input, {}});
    at_level[0].push_back(next);
    level_of[next] = 0;
  }

  const std::size_t cap = spec.fan_out.max;
  auto choose = [&](const std::vector<GateId>& pool) -> std::optional<GateId> {
    std::vector<GateId> ok;
    for (GateId g : pool)
      if (used[g] < cap)
        ok.push_back(g);
    if (ok.empty())
      return std::nullopt;
    return ok[std::uniform_int_distribution<std::size_t>(0, ok.size() - 1)(rng)];
  };

  for (std::size_t level = 1; level <= depth; ++level) {
    std::vector<GateId> below;
    for (std::size_t l = 0; l < level; ++l)
      below.insert(below.end(), at_level[l].begin(), at_level[l].end());
    for (std::size_t w = 0; w < width[level]; ++w) {
      const GateKind kind = pick_kind(rng, spec);
      const std::size_t k = pick_fan_in(rng, spec, kind);
      Gate g{++next, kind, {}};
      auto first = choose(at_level[level - 1]);
      if (!first)
        return std::nullopt;
      g.inputs.push_back(*first);
      ++used[*first];
      for (std::size_t s = 1; s < k; ++s) {
        auto other = choose(below);
        if (!other)
          return std::nullopt;
        g.inputs.push_back(*other);
        ++used[*other];
      }
      level_of[g.id] = level;
      gates.push_back(std::move(g));
      at_level[level].push_back(next);
    }
  }

  // Unused inputs join a gate with spare fan-in.
  for (GateId in : at_level[0]) {
    if (used[in] > 0)
      continue;
    std::vector<std::size_t> hosts;
    for (std::size_t k = 0; k < gates.size(); ++k)
      if (gates[k].kind != GateKind::Not && !is_source(gates[k].kind) && gates[k].inputs.size() < spec.fan_in.max)
        hosts.push_back(k);
    if (hosts.empty())
      return std::nullopt;
    gates[hosts[std::uniform_int_distribution<std::size_t>(0, hosts.size() - 1)(rng)]].inputs.push_back(in);
    ++used[in];
  }

  std::vector<GateId> outputs;
  for (const Gate& g : gates)
    if (!is_source(g.kind) && used[g.id] == 0)
      outputs.push_back(g.id);
  return Circuit(name, std::move(gates), std::move(outputs));
}

bool within(const CorpusSpec& spec, const Circuit& c) {
  const CircuitStats s = stats(c);
  const bool fan_out_ok = spec.formulas() ? s.formula : (s.fan_out >= spec.fan_out.min && s.fan_out <= spec.fan_out.max);
  return s.depth >= spec.depth.min && s.depth <= spec.depth.max && s.gates >= spec.gates.min &&
         s.gates <= spec.gates.max && c.inputs().size() >= spec.inputs.min && c.inputs().size() <= spec.inputs.max &&
         fan_out_ok;
}

} // namespace

void CorpusSpec::validate() const {
  auto check = [](const Range& r, const char* what, std::size_t floor) {
    if (r.min > r.max)
      throw ValidationError(std::string(what) + " range is empty (min " + std::to_string(r.min) + " > max " +
                            std::to_string(r.max) + ")");
    if (r.min < floor)
      throw ValidationError(std::string(what) + " minimum must be at least " + std::to_string(floor));
  };
  check(depth, "depth", 1);
  check(gates, "gate count", 1);
  check(inputs, "input count", 1);
  check(fan_in, "fan-in", 1);
  check(fan_out, "fan-out", 1);
  if (gates.max < depth.min)
    throw ValidationError("gate count max " + std::to_string(gates.max) + " cannot reach depth " +
                          std::to_string(depth.min));
  if (!(maj_fraction >= 0.0 && maj_fraction <= 1.0) || !(not_fraction >= 0.0 && not_fraction <= 1.0))
    throw ValidationError("fractions must lie in [0, 1]");
  if (maj_fraction < 1.0 && not_fraction < 1.0 && fan_in.max < 1)
    throw ValidationError("fan-in range admits no AND/OR gates");
}

std::vector<Circuit> generate_corpus(const CorpusSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::vector<Circuit> out;
  for (std::size_t k = 0; k < spec.count; ++k) {
    const std::string name = "gen_" + std::to_string(spec.seed) + "_" + std::to_string(k);
    bool done = false;
    for (int attempt = 0; attempt < kAttempts && !done; ++attempt) {
      auto c = spec.formulas() ? try_formula(rng, spec, name) : try_circuit(rng, spec, name);
      if (c && within(spec, *c)) {
        out.push_back(std::move(*c));
        done = true;
      }
    }
    if (!done)
      throw ValidationError("could not generate a circuit within the requested ranges");
  }
  return out;
}

std::vector<std::string> write_corpus(const std::vector<Circuit>& corpus, const std::string& dir,
                                      const std::string& prefix) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> paths;
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    const std::string path = (std::filesystem::path(dir) / (prefix + "_" + std::to_string(k) + ".net")).string();
    std::ofstream out(path);
    if (!out)
      throw Error("cannot write " + path);
    out << to_netlist(corpus[k]);
    paths.push_back(path);
  }
  return paths;
}

CorpusSpec formula_suite_spec() {
  CorpusSpec s;
  s.depth = {1, 5};
  s.gates = {1, 20};
  s.inputs = {1, 8};
  s.fan_in = {2, 3};
  s.fan_out = {1, 1};
  s.maj_fraction = 0.25;
  s.seed = 4;
  s.count = 200;
  return s;
}

CorpusSpec circuit_suite_spec() {
  CorpusSpec s;
  s.depth = {1, 4};
  s.gates = {1, 12};
  s.inputs = {1, 6};
  s.fan_in = {1, 3};
  s.fan_out = {1, 3};
  s.maj_fraction = 0.25;
  s.seed = 5;
  s.count = 100;
  return s;
}

} // namespace stepcrn
