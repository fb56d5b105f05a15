#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "stepcrn/circuit.hpp"

namespace stepcrn {

/// A 3-bit row or value, written x1x2x3 with x1 as the most significant bit ("011" = 3).
using Bits3 = std::uint8_t;

Bits3 parse_bits3(const std::string& text);
std::string format_bits3(Bits3 value);

/// The stage function s: five fixed rows plus a chosen completion for 001, 010, 100.
class SFunctionSpec {
public:
  /// Identity completion.
  SFunctionSpec();
  SFunctionSpec(Bits3 at001, Bits3 at010, Bits3 at100);

  Bits3 operator()(Bits3 row) const { return table_[row & 7]; }
  const std::array<Bits3, 8>& table() const { return table_; }

  static bool is_constrained(Bits3 row);

private:
  std::array<Bits3, 8> table_{};
};

/// Inputs 1, 2, 3 (x1, x2, x3); three outputs y1, y2, y3.
Circuit build_s_stage(const SFunctionSpec& spec = {});

/// D chained stages; stage outputs feed the next stage's inputs. Inputs are gates 1, 2, 3.
Circuit build_VD(std::size_t depth, const SFunctionSpec& spec = {});

/// a_0 .. a_n with a_0 = a_1 = 1.
std::vector<Count> fibonacci(std::size_t n);

struct CopyBounds {
  std::vector<Count> bound;          // bound[k]: lower bound on copies of x1 at stage k
  std::vector<std::string> witness;  // the inequality used for bound[k]
  std::vector<Count> propagated;     // every flip-set inequality applied, not only the chain
  std::array<std::vector<int>, 3> flip_sets; // output bits that flip when x_j flips from 111
};

/// Copy-count bounds implied by the flip sets of s around 111 and stage chaining.
CopyBounds min_copy_bounds(std::size_t depth, const SFunctionSpec& spec = {});

struct FibReport {
  std::size_t depth = 0;
  Count fib = 0;           // a_D
  Count demand_x1 = 0;     // compiled demand of input x1
  Count static_volume = 0; // compiled static volume
  std::size_t gates = 0;
  std::size_t circuit_depth = 0;
  bool pass = false;
};

FibReport verify_fib_growth(std::size_t depth, const SFunctionSpec& spec = {});

} // namespace stepcrn
