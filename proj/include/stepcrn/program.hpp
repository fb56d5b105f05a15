#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "stepcrn/crn.hpp"

namespace stepcrn {

/// Species merged into s_0 for one circuit input, per bit value.
struct InputEncoding {
  std::string label; // gate id of the INPUT gate
  Term zero;
  Term one;
  friend bool operator==(const InputEncoding&, const InputEncoding&) = default;
};

/// Species read from the final configuration for one circuit output.
struct OutputDecoding {
  std::string label;
  SpeciesId zero = 0;
  SpeciesId one = 0;
  friend bool operator==(const OutputDecoding&, const OutputDecoding&) = default;
};

struct StepProgram {
  Alphabet alphabet;
  std::vector<Rule> rules;
  std::vector<std::vector<Term>> steps; // s_0 .. s_{k-1}, sparse
  std::vector<InputEncoding> inputs;
  std::vector<OutputDecoding> outputs;

  std::size_t step_count() const { return steps.size(); }

  /// s_0 with the chosen encoding species merged in.
  std::vector<Term> initial_additions(const std::vector<bool>& bits) const;

  /// Every referenced species must be in the alphabet.
  void validate() const;

  friend bool operator==(const StepProgram&, const StepProgram&) = default;
};

std::string serialize(const StepProgram& program);
StepProgram parse_program(std::string_view text);

/// Parses "1001" into bits; throws ValidationError on any other character.
std::vector<bool> parse_bits(std::string_view text);
std::string format_bits(const std::vector<bool>& bits);

} // namespace stepcrn
