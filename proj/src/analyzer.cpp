#include <algorithm>
#include <map>
#include <optional>
#include <regex>
#include <set>

#include "stepcrn/compiler.hpp"

namespace stepcrn {

namespace {

struct SpeciesInfo {
  char kind = '?'; // x, y, a, b
  GateId owner = 0;
  std::optional<GateId> producer; // set for y[j->i]
};

std::optional<SpeciesInfo> describe(const std::string& name) {
  static const std::regex re(R"(^([xyab])\[(\d+)(?:->(\d+))?\][TF]$)");
  std::smatch m;
  if (!std::regex_match(name, m, re))
    return std::nullopt;
  SpeciesInfo info;
  info.kind = m[1].str()[0];
  if (m[3].matched) {
    info.producer = static_cast<GateId>(std::stoul(m[2].str()));
    info.owner = static_cast<GateId>(std::stoul(m[3].str()));
  } else {
    info.owner = static_cast<GateId>(std::stoul(m[2].str()));
  }
  return info;
}

bool is_deleter(const std::string& name) { return name == "dx" || name == "dy"; }

} // namespace

Analysis analyze(const Compilation& compilation) {
  Analysis out;
  const StepProgram& p = compilation.program;
  const Circuit& c = compilation.circuit;
  const Backend backend = compilation.report.backend;

  for (const Rule& r : p.rules) {
    const RuleClass cls = classify_rule(r);
    const bool pure_20 = cls.family == RuleFamily::TrueVoid && cls.reactant_volume == 2 && cls.product_volume == 0;
    const bool cat_21 =
        cls.family == RuleFamily::CatalyticVoid && cls.reactant_volume == 2 && cls.product_volume == 1;
    if (!(pure_20 || (backend == Backend::Catalyst && cat_21)))
      out.problems.push_back("rule '" + r.to_string(p.alphabet) + "' is " + std::string(to_string(cls.family)) +
                             " size (" + std::to_string(cls.reactant_volume) + "," +
                             std::to_string(cls.product_volume) + ")");
  }

  // Injection points: each non-deleter species enters in exactly one step.
  std::map<SpeciesId, std::set<std::size_t>> injected;
  for (std::size_t k = 0; k < p.steps.size(); ++k)
    for (const Term& t : p.steps[k])
      injected[t.species].insert(k);
  for (const auto& in : p.inputs) {
    injected[in.zero.species].insert(0);
    injected[in.one.species].insert(0);
  }
  for (const auto& [s, at] : injected)
    if (at.size() > 1 && !is_deleter(p.alphabet.name(s)))
      out.problems.push_back("species " + p.alphabet.name(s) + " is added in " + std::to_string(at.size()) +
                             " different steps");

  // Reactant pairs stay inside one gate's species or reach only into its inputs' x species.
  auto reads_input = [&](const SpeciesInfo& x, const SpeciesInfo& other) {
    if (x.kind != 'x' || !c.contains(other.owner))
      return false;
    const auto& ins = c.gate(other.owner).inputs;
    return std::find(ins.begin(), ins.end(), x.owner) != ins.end();
  };
  for (const Rule& r : p.rules) {
    std::vector<std::string> names;
    for (const Term& t : r.reactants())
      for (Count k = 0; k < t.count; ++k)
        names.push_back(p.alphabet.name(t.species));
    const std::string text = r.to_string(p.alphabet);
    if (names.size() != 2) {
      out.problems.push_back("rule '" + text + "' is not bimolecular");
      continue;
    }
    const std::string& u = names[0];
    const std::string& v = names[1];
    if (is_deleter(u) || is_deleter(v)) {
      const std::string& d = is_deleter(u) ? u : v;
      const std::string& o = is_deleter(u) ? v : u;
      bool ok = o == d;
      if (!ok) {
        const auto info = describe(o);
        ok = info && ((d == "dx" && info->kind != 'y') || (d == "dy" && info->kind == 'y'));
      }
      if (!ok)
        out.problems.push_back("deleter rule '" + text + "' targets the wrong species family");
      continue;
    }
    const auto iu = describe(u);
    const auto iv = describe(v);
    if (!iu || !iv) {
      out.problems.push_back("rule '" + text + "' uses a non-canonical species");
      continue;
    }
    if (iu->producer && !c.contains(*iu->producer))
      out.problems.push_back("species " + u + " names an unknown producer");
    if (iv->producer && !c.contains(*iv->producer))
      out.problems.push_back("species " + v + " names an unknown producer");
    if (iu->owner == iv->owner || reads_input(*iu, *iv) || reads_input(*iv, *iu))
      continue;
    out.problems.push_back("rule '" + text + "' couples species of unrelated gates");
  }

  // Completion order follows the circuit's edges.
  const auto& done = compilation.report.completion_step;
  for (const Wire& w : c.wires()) {
    auto a = done.find(w.producer);
    auto b = done.find(w.consumer);
    if (a == done.end() || b == done.end() || a->second >= b->second)
      out.problems.push_back("gate " + std::to_string(w.consumer) + " does not complete after its input " +
                             std::to_string(w.producer));
  }
  return out;
}

} // namespace stepcrn
