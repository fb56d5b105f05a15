#include "stepcrn/lowerbound.hpp"

#include <algorithm>
#include <map>

#include "stepcrn/compiler.hpp"

namespace stepcrn {

namespace {

// Rows fixed by the lower-bound argument.
constexpr std::array<std::pair<Bits3, Bits3>, 5> kFixed{{
    {0b111, 0b111},
    {0b011, 0b000},
    {0b101, 0b011},
    {0b110, 0b101},
    {0b000, 0b110},
}};

bool bit(Bits3 v, int var) { return (v >> (2 - var)) & 1; } // var 0 = x1

// A product term: per variable 0, 1, or 2 (absent).
using Cube = std::array<int, 3>;

bool covers(const Cube& c, Bits3 row) {
  for (int v = 0; v < 3; ++v)
    if (c[v] != 2 && c[v] != static_cast<int>(bit(row, v)))
      return false;
  return true;
}

int literals(const Cube& c) { return static_cast<int>(std::count_if(c.begin(), c.end(), [](int l) { return l != 2; })); }

bool contains(const Cube& big, const Cube& small) {
  for (int v = 0; v < 3; ++v)
    if (big[v] != 2 && big[v] != small[v])
      return false;
  return true;
}

// Fewest cubes, then fewest literals, then the lexicographically smallest cube list.
std::vector<Cube> minimum_sop(std::uint8_t on_set) {
  if (on_set == 0)
    return {};
  std::vector<Cube> implicants;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        Cube cube{a, b, c};
        bool ok = true;
        for (Bits3 row = 0; row < 8 && ok; ++row)
          if (covers(cube, row) && !((on_set >> row) & 1))
            ok = false;
        if (ok)
          implicants.push_back(cube);
      }
  std::vector<Cube> primes;
  for (const Cube& c : implicants) {
    const bool dominated = std::any_of(implicants.begin(), implicants.end(),
                                       [&](const Cube& o) { return o != c && contains(o, c); });
    if (!dominated)
      primes.push_back(c);
  }
  std::sort(primes.begin(), primes.end());

  std::vector<Cube> best;
  int best_lits = 0;
  const std::size_t n = primes.size();
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<Cube> pick;
    std::uint8_t covered = 0;
    int lits = 0;
    for (std::size_t k = 0; k < n; ++k)
      if ((mask >> k) & 1) {
        pick.push_back(primes[k]);
        lits += literals(primes[k]);
        for (Bits3 row = 0; row < 8; ++row)
          if (covers(primes[k], row))
            covered |= static_cast<std::uint8_t>(1u << row);
      }
    if (covered != on_set)
      continue;
    const bool better = best.empty() || pick.size() < best.size() ||
                        (pick.size() == best.size() && (lits < best_lits || (lits == best_lits && pick < best)));
    if (better) {
      best = pick;
      best_lits = lits;
    }
  }
  return best;
}

// Appends one stage reading `in` (x1, x2, x3 gate ids); returns its three output gate ids.
std::array<GateId, 3> emit_stage(const SFunctionSpec& spec, const std::array<GateId, 3>& in, std::vector<Gate>& gates,
                                 GateId& next) {
  std::array<GateId, 3> negated{0, 0, 0};
  std::map<Cube, GateId> cube_gate;
  auto literal = [&](int var, int value) {
    if (value == 1)
      return in[var];
    if (!negated[var]) {
      gates.push_back({++next, GateKind::Not, {in[var]}});
      negated[var] = next;
    }
    return negated[var];
  };

  std::array<GateId, 3> out{};
  for (int y = 0; y < 3; ++y) {
    std::uint8_t on_set = 0;
    for (Bits3 row = 0; row < 8; ++row)
      if (bit(spec(row), y))
        on_set |= static_cast<std::uint8_t>(1u << row);
    if (on_set == 0 || on_set == 0xff) {
      gates.push_back({++next, on_set ? GateKind::ConstOne : GateKind::ConstZero, {}});
      out[y] = next;
      continue;
    }
    std::vector<GateId> terms;
    for (const Cube& c : minimum_sop(on_set)) {
      std::vector<GateId> lits;
      for (int v = 0; v < 3; ++v)
        if (c[v] != 2)
          lits.push_back(literal(v, c[v]));
      if (lits.size() == 1) {
        terms.push_back(lits[0]);
        continue;
      }
      auto it = cube_gate.find(c);
      if (it == cube_gate.end()) {
        gates.push_back({++next, GateKind::And, lits});
        it = cube_gate.emplace(c, next).first;
      }
      terms.push_back(it->second);
    }
    gates.push_back({++next, GateKind::Or, terms});
    out[y] = next;
  }
  return out;
}

} // namespace

Bits3 parse_bits3(const std::string& text) {
  if (text.size() != 3 || text.find_first_not_of("01") != std::string::npos)
    throw ValidationError("expected three bits, got '" + text + "'");
  return static_cast<Bits3>((text[0] - '0') << 2 | (text[1] - '0') << 1 | (text[2] - '0'));
}

std::string format_bits3(Bits3 v) {
  return {static_cast<char>('0' + bit(v, 0)), static_cast<char>('0' + bit(v, 1)), static_cast<char>('0' + bit(v, 2))};
}

SFunctionSpec::SFunctionSpec() : SFunctionSpec(0b001, 0b010, 0b100) {}

SFunctionSpec::SFunctionSpec(Bits3 at001, Bits3 at010, Bits3 at100) {
  for (const auto& [row, value] : kFixed)
    table_[row] = value;
  table_[0b001] = at001 & 7;
  table_[0b010] = at010 & 7;
  table_[0b100] = at100 & 7;
}

bool SFunctionSpec::is_constrained(Bits3 row) {
  return std::any_of(kFixed.begin(), kFixed.end(), [&](const auto& e) { return e.first == row; });
}

Circuit build_s_stage(const SFunctionSpec& spec) { return build_VD(1, spec); }

Circuit build_VD(std::size_t depth, const SFunctionSpec& spec) {
  if (depth == 0)
    throw ValidationError("V_D needs at least one stage");
  std::vector<Gate> gates{{1, GateKind::Input, {}}, {2, GateKind::Input, {}}, {3, GateKind::Input, {}}};
  std::array<GateId, 3> wires{1, 2, 3};
  GateId next = 3;
  for (std::size_t k = 0; k < depth; ++k)
    wires = emit_stage(spec, wires, gates, next);
  return Circuit("V" + std::to_string(depth), std::move(gates), {wires[0], wires[1], wires[2]});
}

std::vector<Count> fibonacci(std::size_t n) {
  std::vector<Count> a{1, 1};
  while (a.size() <= n) {
    Count next = 0;
    if (!checked_add(a[a.size() - 1], a[a.size() - 2], next))
      throw ValidationError("Fibonacci term exceeds count capacity");
    a.push_back(next);
  }
  a.resize(n + 1);
  return a;
}

CopyBounds min_copy_bounds(std::size_t depth, const SFunctionSpec& spec) {
  CopyBounds out;
  const Bits3 base = spec(0b111);
  if (base != 0b111)
    throw ValidationError("s(111) must be 111");
  for (int j = 0; j < 3; ++j) {
    const Bits3 flipped = spec(static_cast<Bits3>(0b111 ^ (1u << (2 - j))));
    for (int i = 0; i < 3; ++i)
      if (bit(base, i) != bit(flipped, i))
        out.flip_sets[j].push_back(i);
  }
  auto in_set = [&](int j, int i) {
    const auto& f = out.flip_sets[j];
    return std::find(f.begin(), f.end(), i) != f.end();
  };
  // The chain needs x1 to reach y1 (and so the next stage's x1) and x2 to reach y1.
  if (!in_set(0, 0) || !in_set(0, 1) || !in_set(1, 0))
    throw ValidationError("flip sets of s do not support the copy-count chain");

  // C_k(x1) >= C_k(y1) + C_k(y2) + ... >= C_{k-1}(x1) + C_{k-1}(x2) >= C_{k-1}(x1) + C_{k-2}(x1).
  for (std::size_t k = 0; k <= depth; ++k) {
    if (k < 2) {
      out.bound.push_back(1);
      out.witness.push_back("C_" + std::to_string(k) + "(x1) >= 1 (x1 decides the output at 111)");
      continue;
    }
    Count b = 0;
    if (!checked_add(out.bound[k - 1], out.bound[k - 2], b))
      throw ValidationError("copy bound exceeds count capacity");
    out.bound.push_back(b);
    out.witness.push_back("C_" + std::to_string(k) + "(x1) >= C_" + std::to_string(k - 1) + "(x1) + C_" +
                          std::to_string(k - 1) + "(x2) >= C_" + std::to_string(k - 1) + "(x1) + C_" +
                          std::to_string(k - 2) + "(x1) = " + std::to_string(out.bound[k - 1]) + " + " +
                          std::to_string(out.bound[k - 2]));
  }

  // All inequalities at once: X_k(j) = sum over i in F_j of Y_k(i), Y_k(i) = X_{k-1}(i), Y_0 = 1.
  std::array<Count, 3> y{1, 1, 1};
  for (std::size_t k = 0; k <= depth; ++k) {
    std::array<Count, 3> x{0, 0, 0};
    for (int j = 0; j < 3; ++j)
      for (int i : out.flip_sets[j])
        x[j] = checked_add(x[j], y[i], x[j]) ? x[j] : ~Count{0};
    out.propagated.push_back(x[0]);
    y = x;
  }
  return out;
}

FibReport verify_fib_growth(std::size_t depth, const SFunctionSpec& spec) {
  FibReport r;
  r.depth = depth;
  r.fib = fibonacci(depth).back();
  const Circuit c = build_VD(depth, spec);
  const CircuitStats s = stats(c);
  r.gates = s.gates;
  r.circuit_depth = s.depth;
  const Compilation comp = compile_circuit_exp(c);
  r.demand_x1 = comp.report.demand.at(1);
  r.static_volume = comp.report.static_volume;
  r.pass = r.demand_x1 >= r.fib && r.static_volume >= r.fib;
  return r;
}

} // namespace stepcrn
