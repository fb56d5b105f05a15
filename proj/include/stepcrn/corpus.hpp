#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stepcrn/circuit.hpp"

namespace stepcrn {

struct Range {
  std::size_t min = 1;
  std::size_t max = 1;
};

struct CorpusSpec {
  Range depth{1, 4};
  Range gates{1, 20};  // non-source gates
  Range inputs{1, 6};
  Range fan_in{2, 3};  // NOT gates always take exactly one input
  Range fan_out{1, 1}; // {1}: formulas (inputs may still feed several leaves)
  double maj_fraction = 0.25;
  double not_fraction = 0.15;
  std::uint64_t seed = 0;
  std::size_t count = 10;

  bool formulas() const { return fan_out.max == 1; }
  /// Throws ValidationError on empty or contradictory ranges.
  void validate() const;
};

/// Deterministic in the spec (seed included).
std::vector<Circuit> generate_corpus(const CorpusSpec& spec);

/// Writes <dir>/<prefix>_<k>.net and returns the paths.
std::vector<std::string> write_corpus(const std::vector<Circuit>& corpus, const std::string& dir,
                                      const std::string& prefix = "circuit");

/// The two generated suites used by the acceptance run.
CorpusSpec formula_suite_spec(); // 200 formulas: D <= 5, G <= 20, n <= 8, fan-in 2..3
CorpusSpec circuit_suite_spec(); // 100 circuits: D <= 4, F_out <= 3, n <= 6, fan-in <= 3

} // namespace stepcrn
