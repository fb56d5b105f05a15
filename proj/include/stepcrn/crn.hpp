#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "stepcrn/common.hpp"

namespace stepcrn {

using SpeciesId = std::uint32_t;

/// True for names in the compiler's canonical grammar: x[i]T, y[j->i]F, a[i]T, b[i]F, dx, dy, ...
bool is_canonical_species(std::string_view name);

/// Ordered, append-only species set. Frozen once a program is built.
class Alphabet {
public:
  Alphabet() = default;
  explicit Alphabet(const std::vector<std::string>& names);

  /// Returns the existing ordinal if the name is already present.
  SpeciesId intern(std::string_view name);
  SpeciesId at(std::string_view name) const; // throws ValidationError
  bool contains(std::string_view name) const { return index_.count(std::string(name)) != 0; }
  const std::string& name(SpeciesId s) const { return names_.at(s); }
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

  friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.names_ == b.names_; }

private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, SpeciesId> index_;
};

/// Sparse multiset entry.
struct Term {
  SpeciesId species = 0;
  Count count = 0;
  friend bool operator==(const Term&, const Term&) = default;
};

/// Dense count vector over an alphabet.
class Configuration {
public:
  Configuration() = default;
  explicit Configuration(std::size_t species) : counts_(species, 0) {}

  std::size_t size() const { return counts_.size(); }
  Count operator[](SpeciesId s) const { return counts_[s]; }
  Count& operator[](SpeciesId s) { return counts_[s]; }
  const std::vector<Count>& counts() const { return counts_; }

  Count volume() const;
  bool empty() const { return volume() == 0; }

  /// Adds a sparse multiset, overflow-checked.
  void add(const std::vector<Term>& terms);

  /// Non-zero entries in alphabet order.
  std::vector<Term> sparse() const;
  std::string to_string(const Alphabet& alphabet) const; // "{x[1]T:2, dy:1}"

  friend bool operator==(const Configuration&, const Configuration&) = default;
  friend bool operator<(const Configuration& a, const Configuration& b) { return a.counts_ < b.counts_; }

private:
  std::vector<Count> counts_;
};

enum class RuleFamily { TrueVoid, CatalyticVoid, Autogenesis, Other };
std::string_view to_string(RuleFamily family);

struct RuleClass {
  Count reactant_volume = 0; // i
  Count product_volume = 0;  // j
  RuleFamily family = RuleFamily::Other;
  friend bool operator==(const RuleClass&, const RuleClass&) = default;
};

/// R_r -> R_p. Terms are merged per species and sorted by ordinal.
class Rule {
public:
  Rule(std::vector<Term> reactants, std::vector<Term> products);

  const std::vector<Term>& reactants() const { return reactants_; }
  const std::vector<Term>& products() const { return products_; }

  /// R_a = R_p - R_r, sparse, zero entries dropped.
  const std::vector<std::pair<SpeciesId, long long>>& delta() const { return delta_; }

  std::string to_string(const Alphabet& alphabet) const; // "x[1]T + y[1->5]F -> ."

  friend bool operator==(const Rule& a, const Rule& b) {
    return a.reactants_ == b.reactants_ && a.products_ == b.products_;
  }

private:
  std::vector<Term> reactants_;
  std::vector<Term> products_;
  std::vector<std::pair<SpeciesId, long long>> delta_;
};

RuleClass classify_rule(const Rule& rule);
bool is_void(const RuleClass& cls);

bool applicable(const Configuration& c, const Rule& rule);
/// Throws ValidationError if the rule is not applicable.
Configuration apply(const Configuration& c, const Rule& rule);
void apply_in_place(Configuration& c, const Rule& rule);
bool is_terminal(const Configuration& c, const std::vector<Rule>& rules);

/// Parses "A + B -> .", "2 A -> .", "dx + x[1]T -> dx" against the alphabet, interning unknown names.
Rule parse_rule(std::string_view text, Alphabet& alphabet);

} // namespace stepcrn
