// Independent oracles for the test binaries. Nothing here calls into the
// library's own evaluator, demand pass or enumerator.
#pragma once

#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "stepcrn/circuit.hpp"
#include "stepcrn/crn.hpp"

namespace oracle {

inline std::string data_path(const std::string& file) { return std::string(STEPCRN_DATA_DIR) + "/" + file; }

inline stepcrn::Circuit load(const std::string& file) {
  std::ifstream in(data_path(file));
  std::stringstream s;
  s << in.rdbuf();
  return stepcrn::parse_circuit(s.str());
}

// Plain recursive truth-table evaluation; inputs bound in declaration order.
inline std::vector<bool> evaluate(const stepcrn::Circuit& c, const std::vector<bool>& bits) {
  using stepcrn::GateKind;
  std::map<stepcrn::GateId, bool> input_value;
  std::size_t next = 0;
  for (const auto& g : c.gates())
    if (g.kind == GateKind::Input)
      input_value[g.id] = bits.at(next++);
  std::function<bool(stepcrn::GateId)> value = [&](stepcrn::GateId id) -> bool {
    const auto& g = c.gate(id);
    std::size_t ones = 0;
    for (auto in : g.inputs)
      ones += value(in) ? 1 : 0;
    const std::size_t n = g.inputs.size();
    switch (g.kind) {
    case GateKind::Input: return input_value.at(id);
    case GateKind::ConstZero: return false;
    case GateKind::ConstOne: return true;
    case GateKind::And: return ones == n;
    case GateKind::Or: return ones > 0;
    case GateKind::Not: return ones == 0;
    case GateKind::Maj: return 2 * ones > n; // an even fan-in tie counts as a padded false vote
    }
    return false;
  };
  std::vector<bool> out;
  for (auto o : c.outputs())
    out.push_back(value(o));
  return out;
}

// Copies a gate must produce: one per path from it to an output designation.
// Memoized per call so deep fan-out chains stay polynomial.
inline stepcrn::Count path_count(const stepcrn::Circuit& c, stepcrn::GateId id) {
  std::map<stepcrn::GateId, stepcrn::Count> memo;
  std::function<stepcrn::Count(stepcrn::GateId)> count = [&](stepcrn::GateId g0) {
    if (auto it = memo.find(g0); it != memo.end())
      return it->second;
    stepcrn::Count paths = 0;
    for (auto o : c.outputs())
      if (o == g0)
        ++paths;
    for (const auto& g : c.gates())
      for (auto in : g.inputs)
        if (in == g0)
          paths += count(g.id);
    return memo[g0] = paths;
  };
  return count(id);
}

// Breadth-first TERM set over an explicit species count map.
using State = std::vector<stepcrn::Count>;

inline std::set<State> terminals(const State& start, const std::vector<stepcrn::Rule>& rules) {
  std::set<State> seen{start}, term;
  std::vector<State> frontier{start};
  while (!frontier.empty()) {
    std::vector<State> next;
    for (const State& s : frontier) {
      bool any = false;
      for (const auto& r : rules) {
        bool ok = true;
        for (const auto& t : r.reactants())
          ok = ok && s[t.species] >= t.count;
        if (!ok)
          continue;
        any = true;
        State n = s;
        for (const auto& t : r.reactants())
          n[t.species] -= t.count;
        for (const auto& t : r.products())
          n[t.species] += t.count;
        if (seen.insert(n).second)
          next.push_back(n);
      }
      if (!any)
        term.insert(s);
    }
    frontier = std::move(next);
  }
  return term;
}

inline std::vector<std::uint64_t> fibonacci(std::size_t n) {
  std::vector<std::uint64_t> a{1, 1};
  while (a.size() <= n)
    a.push_back(a[a.size() - 1] + a[a.size() - 2]);
  a.resize(n + 1);
  return a;
}

inline std::vector<bool> bits_of(std::uint64_t v, std::size_t n) {
  std::vector<bool> b(n);
  for (std::size_t k = 0; k < n; ++k)
    b[k] = (v >> (n - 1 - k)) & 1;
  return b;
}

// Random layered circuit for property tests, built without the corpus generator.
inline stepcrn::Circuit random_circuit(std::mt19937_64& rng, std::size_t inputs, std::size_t gates) {
  using stepcrn::GateKind;
  std::vector<stepcrn::Gate> gs;
  for (stepcrn::GateId i = 1; i <= inputs; ++i)
    gs.push_back({i, GateKind::Input, {}});
  const GateKind kinds[] = {GateKind::And, GateKind::Or, GateKind::Not, GateKind::Maj, GateKind::ConstOne,
                            GateKind::ConstZero};
  std::set<stepcrn::GateId> unused;
  for (stepcrn::GateId i = 1; i <= inputs; ++i)
    unused.insert(i);
  for (std::size_t k = 0; k < gates; ++k) {
    const auto id = static_cast<stepcrn::GateId>(gs.size() + 1);
    GateKind kind = kinds[rng() % 6];
    std::size_t n = kind == GateKind::Not ? 1 : stepcrn::is_source(kind) ? 0 : 1 + rng() % 4;
    stepcrn::Gate g{id, kind, {}};
    for (std::size_t s = 0; s < n; ++s) {
      auto src = static_cast<stepcrn::GateId>(1 + rng() % gs.size());
      g.inputs.push_back(src);
      unused.erase(src);
    }
    gs.push_back(g);
    unused.insert(id);
  }
  // Whatever nobody reads becomes an output; sources unread get a buffer.
  std::vector<stepcrn::GateId> outs;
  for (auto id : unused) {
    if (id <= inputs) {
      const auto b = static_cast<stepcrn::GateId>(gs.size() + 1);
      gs.push_back({b, GateKind::Or, {id}});
      outs.push_back(b);
    } else {
      outs.push_back(id);
    }
  }
  return stepcrn::Circuit("random", gs, outs);
}

} // namespace oracle
