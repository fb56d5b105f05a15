#pragma once

#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "stepcrn/program.hpp"

namespace stepcrn {

inline constexpr Count kDefaultBudget = 50'000'000;
inline constexpr std::size_t kDefaultStateCap = 2'000'000;

struct RunOptions {
  bool record_steps = true; // keep per-step terminal configurations
  bool trace = false;       // one line per rule application
  Count budget = kDefaultBudget; // applications per step; enforced only for non-void rule sets
};

struct Decoded {
  std::vector<bool> bits;
  std::string error; // empty on success; "AMBIGUOUS(<label>)" or "MISSING(<label>)" otherwise
  bool ok() const { return error.empty(); }
  friend bool operator==(const Decoded&, const Decoded&) = default;
};

struct RunResult {
  Configuration final;
  std::vector<Configuration> per_step_terminal;
  std::vector<Count> entry_volume;    // volume right after each step's additions
  std::vector<Count> terminal_volume; // volume once each step is terminal
  Count peak_volume = 0;
  std::size_t step_count = 0;
  Count applications = 0;
  Decoded decoded;
  std::vector<std::string> trace;

  friend bool operator==(const RunResult&, const RunResult&) = default;
};

/// Stable text rendering, used for byte-level reproducibility checks.
std::string render(const RunResult& result, const Alphabet& alphabet);

/// Reusable random-maximal executor for one rule set. Not thread-safe; make one per worker.
class Simulator {
public:
  Simulator(const Alphabet& alphabet, const std::vector<Rule>& rules);

  /// Adds `additions` to `c`, then applies uniformly chosen applicable rules until terminal.
  /// `c` is assumed terminal on entry unless `full_scan` is set.
  void run_step(Configuration& c, const std::vector<Term>& additions, std::mt19937_64& rng,
                const RunOptions& options = {}, std::size_t step_index = 0,
                std::vector<std::string>* trace = nullptr, bool full_scan = true);

  RunResult run_program(const StepProgram& program, const std::vector<bool>& bits, std::uint64_t seed,
                        const RunOptions& options = {});

  Count applications() const { return applications_; }
  Count peak() const { return peak_; }
  bool all_void() const { return all_void_; }

private:
  void refresh(const Configuration& c, std::size_t rule);
  void mark(std::size_t rule, bool on);

  const Alphabet& alphabet_;
  const std::vector<Rule>& rules_;
  std::vector<std::string> rule_text_;
  std::vector<std::vector<std::size_t>> by_reactant_; // species -> rules consuming it
  std::vector<std::size_t> active_;                   // applicable rules
  std::vector<std::size_t> slot_;                     // rule -> index in active_, or npos
  bool all_void_ = true;
  Count applications_ = 0;
  Count peak_ = 0;
};

/// Bounded uniform draw in [0, n) (Lemire), independent of library distribution details.
std::size_t uniform_index(std::mt19937_64& rng, std::size_t n);

/// Convenience wrapper with a fresh Simulator.
Configuration run_step(const Configuration& c, const std::vector<Term>& additions, const std::vector<Rule>& rules,
                       std::uint64_t seed, Count budget = kDefaultBudget);

RunResult run_program(const StepProgram& program, const std::vector<bool>& bits, std::uint64_t seed,
                      const RunOptions& options = {});

Decoded decode_output(const Configuration& c, const StepProgram& program);

using TerminalSet = std::set<Configuration>;

/// Exact TERM set reachable from c. Throws CapacityError past state_cap stored configurations.
TerminalSet enumerate_terminals(const Configuration& c, const std::vector<Rule>& rules,
                                std::size_t state_cap = kDefaultStateCap);

struct ProgramTerminals {
  bool skipped = false;   // some step-entry volume exceeded the cap
  Count max_entry_volume = 0;
  TerminalSet terminals;  // final TERM set over all schedules
  std::size_t explored = 0;
};

/// Unions the TERM set step by step over every schedule of the whole program.
ProgramTerminals enumerate_program_terminals(const StepProgram& program, const std::vector<bool>& bits,
                                             Count volume_cap = 14, std::size_t state_cap = kDefaultStateCap);

} // namespace stepcrn
