#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace stepcrn {

/// Species copy counts. Demand-scaled programs grow as F_out^D, so 32 bits
/// is not enough; all arithmetic on counts is overflow-checked.
using Count = std::uint64_t;

using GateId = std::uint32_t;

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed netlist or program text. Line and column are 1-based.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        reason_(what), line_(line), column_(column) {}

  const std::string& reason() const { return reason_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

private:
  std::string reason_;
  std::size_t line_;
  std::size_t column_;
};

/// Structurally invalid circuit, program, or argument combination.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// A run exceeded its rule-application budget (only possible with non-void rules).
class BudgetError : public Error {
public:
  using Error::Error;
};

/// Exhaustive exploration stored more configurations than allowed.
class CapacityError : public Error {
public:
  using Error::Error;
};

/// A species count would not fit in Count.
class OverflowError : public Error {
public:
  OverflowError(const std::string& what, GateId gate)
      : Error(what + " (gate " + std::to_string(gate) + ")"), gate_(gate) {}

  GateId gate() const { return gate_; }

private:
  GateId gate_;
};

inline bool checked_add(Count a, Count b, Count& out) { return !__builtin_add_overflow(a, b, &out); }
inline bool checked_mul(Count a, Count b, Count& out) { return !__builtin_mul_overflow(a, b, &out); }

} // namespace stepcrn
