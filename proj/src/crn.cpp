#include "stepcrn/crn.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <regex>
#include <sstream>

namespace stepcrn {

bool is_canonical_species(std::string_view name) {
  static const std::regex re(R"(^(x\[\d+\]|y\[\d+\]|y\[\d+->\d+\]|a\[\d+\]|b\[\d+\])[TF]$|^d[xy]$)");
  return std::regex_match(name.begin(), name.end(), re);
}

Alphabet::Alphabet(const std::vector<std::string>& names) {
  for (const auto& n : names)
    if (!index_.count(n))
      intern(n);
}

SpeciesId Alphabet::intern(std::string_view name) {
  std::string key(name);
  auto it = index_.find(key);
  if (it != index_.end())
    return it->second;
  const auto id = static_cast<SpeciesId>(names_.size());
  names_.push_back(key);
  index_.emplace(std::move(key), id);
  return id;
}

SpeciesId Alphabet::at(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end())
    throw ValidationError("unknown species '" + std::string(name) + "'");
  return it->second;
}

Count Configuration::volume() const {
  Count v = 0;
  for (Count c : counts_)
    v += c;
  return v;
}

void Configuration::add(const std::vector<Term>& terms) {
  for (const Term& t : terms) {
    if (t.species >= counts_.size())
      throw ValidationError("species ordinal outside configuration");
    if (!checked_add(counts_[t.species], t.count, counts_[t.species]))
      throw ValidationError("species count overflow");
  }
}

std::vector<Term> Configuration::sparse() const {
  std::vector<Term> out;
  for (std::size_t i = 0; i < counts_.size(); ++i)
    if (counts_[i] != 0)
      out.push_back({static_cast<SpeciesId>(i), counts_[i]});
  return out;
}

std::string Configuration::to_string(const Alphabet& alphabet) const {
  std::string out = "{";
  bool first = true;
  for (const Term& t : sparse()) {
    if (!first)
      out += ", ";
    first = false;
    out += alphabet.name(t.species) + ":" + std::to_string(t.count);
  }
  return out + "}";
}

std::string_view to_string(RuleFamily family) {
  switch (family) {
  case RuleFamily::TrueVoid:
    return "TRUE_VOID";
  case RuleFamily::CatalyticVoid:
    return "CATALYTIC_VOID";
  case RuleFamily::Autogenesis:
    return "AUTOGENESIS";
  case RuleFamily::Other:
    break;
  }
  return "OTHER";
}

namespace {

std::vector<Term> normalize(std::vector<Term> terms) {
  std::map<SpeciesId, Count> merged;
  for (const Term& t : terms)
    if (t.count != 0)
      merged[t.species] += t.count;
  std::vector<Term> out;
  for (const auto& [s, c] : merged)
    out.push_back({s, c});
  return out;
}

Count volume_of(const std::vector<Term>& terms) {
  Count v = 0;
  for (const Term& t : terms)
    v += t.count;
  return v;
}

void append_side(std::string& out, const std::vector<Term>& side, const Alphabet& alphabet) {
  if (side.empty()) {
    out += ".";
    return;
  }
  for (std::size_t i = 0; i < side.size(); ++i) {
    if (i)
      out += " + ";
    if (side[i].count != 1)
      out += std::to_string(side[i].count) + " ";
    out += alphabet.name(side[i].species);
  }
}

} // namespace

Rule::Rule(std::vector<Term> reactants, std::vector<Term> products)
    : reactants_(normalize(std::move(reactants))), products_(normalize(std::move(products))) {
  std::map<SpeciesId, long long> d;
  for (const Term& t : reactants_)
    d[t.species] -= static_cast<long long>(t.count);
  for (const Term& t : products_)
    d[t.species] += static_cast<long long>(t.count);
  for (const auto& [s, v] : d)
    if (v != 0)
      delta_.emplace_back(s, v);
}

std::string Rule::to_string(const Alphabet& alphabet) const {
  std::string out;
  append_side(out, reactants_, alphabet);
  out += " -> ";
  append_side(out, products_, alphabet);
  return out;
}

RuleClass classify_rule(const Rule& rule) {
  RuleClass cls;
  cls.reactant_volume = volume_of(rule.reactants());
  cls.product_volume = volume_of(rule.products());
  const auto& d = rule.delta();
  const bool nonzero = !d.empty();
  const bool no_positive = std::all_of(d.begin(), d.end(), [](const auto& e) { return e.second <= 0; });
  const bool no_negative = std::all_of(d.begin(), d.end(), [](const auto& e) { return e.second >= 0; });
  if (rule.reactants().empty())
    cls.family = RuleFamily::Other;
  else if (nonzero && no_positive)
    cls.family = rule.products().empty() ? RuleFamily::TrueVoid : RuleFamily::CatalyticVoid;
  else if (nonzero && no_negative)
    cls.family = RuleFamily::Autogenesis;
  else
    cls.family = RuleFamily::Other;
  return cls;
}

bool is_void(const RuleClass& cls) {
  return cls.family == RuleFamily::TrueVoid || cls.family == RuleFamily::CatalyticVoid;
}

namespace {

void check_alphabet(const Configuration& c, const Rule& rule) {
  for (const Term& t : rule.reactants())
    if (t.species >= c.size())
      throw ValidationError("rule and configuration use different alphabets");
  for (const Term& t : rule.products())
    if (t.species >= c.size())
      throw ValidationError("rule and configuration use different alphabets");
}

} // namespace

bool applicable(const Configuration& c, const Rule& rule) {
  check_alphabet(c, rule);
  for (const Term& t : rule.reactants())
    if (c[t.species] < t.count)
      return false;
  return true;
}

void apply_in_place(Configuration& c, const Rule& rule) {
  if (!applicable(c, rule))
    throw ValidationError("rule not applicable");
  for (const auto& [s, v] : rule.delta())
    c[s] = static_cast<Count>(static_cast<long long>(c[s]) + v);
}

Configuration apply(const Configuration& c, const Rule& rule) {
  Configuration out = c;
  apply_in_place(out, rule);
  return out;
}

bool is_terminal(const Configuration& c, const std::vector<Rule>& rules) {
  return std::none_of(rules.begin(), rules.end(), [&](const Rule& r) { return applicable(c, r); });
}

Rule parse_rule(std::string_view text, Alphabet& alphabet) {
  // Tokens with their 1-based columns, so errors can point into the text.
  std::vector<std::string> tokens;
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < text.size();) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    const std::size_t j = std::min(text.find_first_of(" \t\r\n", i), text.size());
    tokens.emplace_back(text.substr(i, j - i));
    cols.push_back(i + 1);
    i = j;
  }
  auto fail = [&](const std::string& why, std::size_t tok) -> void {
    throw ParseError(why, 1, tok < cols.size() ? cols[tok] : text.size() + 1);
  };

  auto arrow = std::find(tokens.begin(), tokens.end(), "->");
  if (arrow == tokens.end())
    fail("rule has no '->'", tokens.size());

  auto parse_side = [&](auto begin, auto end, bool allow_empty) {
    std::vector<Term> side;
    if (end - begin == 1 && (*begin == "." || *begin == "0")) {
      if (!allow_empty)
        fail("rule has empty reactants", begin - tokens.begin());
      return side;
    }
    Count coeff = 1;
    bool expect_term = true;
    bool have_coeff = false;
    for (auto it = begin; it != end; ++it) {
      const std::string& tok = *it;
      if (!expect_term) {
        if (tok != "+")
          fail("expected '+' in rule, got '" + tok + "'", it - tokens.begin());
        expect_term = true;
        continue;
      }
      if (!have_coeff && std::all_of(tok.begin(), tok.end(), ::isdigit)) {
        coeff = std::stoull(tok);
        have_coeff = true;
        continue;
      }
      if (tok == "+" || tok == "." )
        fail("unexpected '" + tok + "' in rule", it - tokens.begin());
      side.push_back({alphabet.intern(tok), coeff});
      coeff = 1;
      have_coeff = false;
      expect_term = false;
    }
    if (expect_term)
      fail("rule side ends without a species", end - tokens.begin());
    return side;
  };

  auto lhs = parse_side(tokens.begin(), arrow, false);
  auto rhs = parse_side(arrow + 1, tokens.end(), true);
  if (lhs.empty())
    fail("rule has empty reactants", 0);
  return Rule(std::move(lhs), std::move(rhs));
}

} // namespace stepcrn
