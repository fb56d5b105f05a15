#include <algorithm>
#include <map>

#include "stepcrn/compiler.hpp"

namespace stepcrn {

namespace {

char tf(bool value) { return value ? 'T' : 'F'; }

Count scaled(Count base, Count m, GateId gate) {
  Count out = 0;
  if (!checked_mul(base, m, out))
    throw OverflowError("species count exceeds count capacity", gate);
  return out;
}

// Distinct producers in first-seen order with their wire multiplicity.
std::vector<std::pair<GateId, Count>> slots_of(const std::vector<GateId>& fan_in) {
  std::vector<std::pair<GateId, Count>> out;
  for (GateId j : fan_in) {
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& e) { return e.first == j; });
    if (it == out.end())
      out.emplace_back(j, 1);
    else
      ++it->second;
  }
  return out;
}

void push(std::vector<NamedTerm>& step, std::string species, Count count) {
  if (count != 0)
    step.push_back({std::move(species), count});
}

} // namespace

std::string x_species(GateId i, bool value) { return "x[" + std::to_string(i) + "]" + tf(value); }
std::string y_species(GateId i, bool value) { return "y[" + std::to_string(i) + "]" + tf(value); }
std::string wire_species(GateId from, GateId to, bool value) {
  return "y[" + std::to_string(from) + "->" + std::to_string(to) + "]" + tf(value);
}
std::string a_species(GateId i, bool value) { return "a[" + std::to_string(i) + "]" + tf(value); }
std::string b_species(GateId i, bool value) { return "b[" + std::to_string(i) + "]" + tf(value); }

GateLowering lower_gate(GateKind kind, GateId i, const std::vector<GateId>& fan_in, Count m,
                        const std::set<GateId>& captured) {
  if (m == 0)
    throw ValidationError("multiplicity must be positive (gate " + std::to_string(i) + ")");
  GateLowering out;
  const auto slots = slots_of(fan_in);
  auto void_rule = [&](std::string r1, std::string r2) { out.rules.push_back({{std::move(r1), std::move(r2)}, {}}); };

  switch (kind) {
  case GateKind::And: {
    auto& add = out.additions.emplace_back();
    push(add, y_species(i, true), m);
    for (const auto& [j, k] : slots) {
      push(add, wire_species(j, i, false), scaled(k, m, i));
      void_rule(x_species(j, true), wire_species(j, i, false));
      void_rule(x_species(j, false), y_species(i, true));
    }
    break;
  }
  case GateKind::Or: {
    auto& add = out.additions.emplace_back();
    push(add, y_species(i, false), m);
    for (const auto& [j, k] : slots) {
      push(add, wire_species(j, i, true), scaled(k, m, i));
      void_rule(x_species(j, true), y_species(i, false));
      void_rule(x_species(j, false), wire_species(j, i, true));
    }
    break;
  }
  case GateKind::Not: {
    if (fan_in.size() != 1)
      throw ValidationError("NOT gate " + std::to_string(i) + " needs exactly one input");
    auto& add = out.additions.emplace_back();
    push(add, y_species(i, true), m);
    push(add, y_species(i, false), m);
    void_rule(x_species(fan_in[0], true), y_species(i, true));
    void_rule(x_species(fan_in[0], false), y_species(i, false));
    break;
  }
  case GateKind::Maj: {
    if (fan_in.empty())
      throw ValidationError("MAJ gate " + std::to_string(i) + " needs inputs");
    const Count n = fan_in.size();
    const Count pad = n % 2 == 0 ? 1 : 0;
    const Count half = n / 2;
    Count pooled = 0;
    for (const auto& [j, k] : slots)
      if (!captured.count(j))
        pooled += k;

    out.additions.resize(3);
    auto& s1 = out.additions[0];
    auto& s2 = out.additions[1];
    auto& s3 = out.additions[2];
    push(s1, a_species(i, true), scaled(pooled, m, i));
    push(s1, a_species(i, false), scaled(pooled + pad, m, i));
    push(s2, b_species(i, true), scaled(half, m, i));
    push(s2, b_species(i, false), scaled(half, m, i));
    push(s3, y_species(i, true), m);
    push(s3, y_species(i, false), m);

    const bool pool_true = pooled > 0;
    const bool pool_false = pooled + pad > 0;
    for (const auto& [j, k] : slots) {
      if (captured.count(j)) {
        push(s1, wire_species(j, i, true), scaled(k, m, i));
        push(s1, wire_species(j, i, false), scaled(k, m, i));
        void_rule(x_species(j, true), wire_species(j, i, false));
        void_rule(x_species(j, false), wire_species(j, i, true));
      } else {
        void_rule(x_species(j, true), a_species(i, false));
        void_rule(x_species(j, false), a_species(i, true));
      }
    }
    // Votes (pool or captured) against b in step 2, then against y in step 3.
    std::vector<std::pair<std::string, bool>> votes;
    if (pool_true)
      votes.emplace_back(a_species(i, true), true);
    if (pool_false)
      votes.emplace_back(a_species(i, false), false);
    for (const auto& [j, k] : slots)
      if (captured.count(j)) {
        votes.emplace_back(wire_species(j, i, true), true);
        votes.emplace_back(wire_species(j, i, false), false);
      }
    if (half > 0)
      for (const auto& [v, value] : votes)
        void_rule(v, b_species(i, !value));
    for (const auto& [v, value] : votes)
      void_rule(v, y_species(i, !value));
    break;
  }
  case GateKind::Input:
  case GateKind::ConstZero:
  case GateKind::ConstOne:
    throw ValidationError("source gate " + std::to_string(i) + " has no gate lowering");
  }
  return out;
}

GateLowering lower_convert(GateKind kind, GateId i, const std::vector<GateId>& fan_in, Count m, bool catalytic) {
  GateLowering out;
  auto& add = out.additions.emplace_back();
  push(add, x_species(i, true), m);
  push(add, x_species(i, false), m);
  // Each surviving output species deletes the complement input species.
  auto rule = [&](std::string keeper, bool keeper_value) {
    NamedRule r{{keeper, x_species(i, !keeper_value)}, {}};
    if (catalytic)
      r.products.push_back(keeper);
    out.rules.push_back(std::move(r));
  };
  std::vector<GateId> distinct;
  for (GateId j : fan_in)
    if (std::find(distinct.begin(), distinct.end(), j) == distinct.end())
      distinct.push_back(j);

  switch (kind) {
  case GateKind::And:
    rule(y_species(i, true), true);
    for (GateId j : distinct)
      rule(wire_species(j, i, false), false);
    break;
  case GateKind::Or:
    rule(y_species(i, false), false);
    for (GateId j : distinct)
      rule(wire_species(j, i, true), true);
    break;
  case GateKind::ConstZero:
    rule(y_species(i, false), false);
    break;
  case GateKind::ConstOne:
    rule(y_species(i, true), true);
    break;
  case GateKind::Input:
  case GateKind::Not:
  case GateKind::Maj:
    rule(y_species(i, true), true);
    rule(y_species(i, false), false);
    break;
  }
  return out;
}

} // namespace stepcrn
