#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stepcrn/compiler.hpp"
#include "stepcrn/engine.hpp"

namespace stepcrn {

enum class InputMode { All, Random };

struct VerifyOptions {
  InputMode mode = InputMode::All;
  std::size_t random_count = 32;
  std::uint64_t input_seed = 0; // drives RANDOM input selection
  std::vector<std::uint64_t> seeds = default_seeds();
  bool exhaustive = false;
  Count volume_cap = 14;
  std::size_t input_cap = 12; // ALL mode refuses circuits with more inputs
  std::size_t state_cap = kDefaultStateCap;

  static std::vector<std::uint64_t> default_seeds(); // 0..24
};

struct Counterexample {
  std::string circuit;
  std::vector<bool> input;
  std::optional<std::uint64_t> seed; // empty for an exhaustive-mode terminal
  std::vector<bool> expected;
  std::string got;
  std::string terminal;
};

struct VerifySummary {
  std::size_t inputs = 0;
  std::size_t runs = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t exhaustive_checked = 0; // inputs whose full TERM set was enumerated
  std::size_t exhaustive_skipped = 0; // inputs over the volume cap
  std::size_t terminals = 0;          // distinct final terminals seen in exhaustive mode
  Count max_peak = 0;
  Count max_resident = 0; // largest per-level terminal volume
  std::optional<Counterexample> first;

  bool ok() const { return failed == 0; }
  friend bool operator==(const VerifySummary& a, const VerifySummary& b);
};

std::string to_text(const VerifySummary& s);
std::string to_json(const VerifySummary& s);

/// Assignments to test, in order: all 2^n, or `random_count` distinct draws.
std::vector<std::vector<bool>> select_inputs(std::size_t n, const VerifyOptions& options);

/// Reference checks one (input, seed) at a time.
VerifySummary verify_serial(const Circuit& circuit, const Compilation& compilation, const VerifyOptions& options);
/// Same result as verify_serial; (input, seed) items spread over OpenMP threads.
VerifySummary verify_parallel(const Circuit& circuit, const Compilation& compilation, const VerifyOptions& options);

} // namespace stepcrn
