#include "stepcrn/program.hpp"

#include <algorithm>
#include <sstream>

namespace stepcrn {

std::vector<Term> StepProgram::initial_additions(const std::vector<bool>& bits) const {
  if (bits.size() != inputs.size())
    throw ValidationError("expected " + std::to_string(inputs.size()) + " input bits, got " +
                          std::to_string(bits.size()));
  std::vector<Term> out = steps.empty() ? std::vector<Term>{} : steps.front();
  for (std::size_t i = 0; i < inputs.size(); ++i)
    out.push_back(bits[i] ? inputs[i].one : inputs[i].zero);
  return out;
}

void StepProgram::validate() const {
  const std::size_t n = alphabet.size();
  auto check = [&](SpeciesId s, const std::string& where) {
    if (s >= n)
      throw ValidationError(where + " references a species outside the alphabet");
  };
  for (std::size_t r = 0; r < rules.size(); ++r) {
    for (const Term& t : rules[r].reactants())
      check(t.species, "rule " + std::to_string(r));
    for (const Term& t : rules[r].products())
      check(t.species, "rule " + std::to_string(r));
  }
  for (std::size_t k = 0; k < steps.size(); ++k)
    for (const Term& t : steps[k])
      check(t.species, "step " + std::to_string(k));
  for (const auto& in : inputs) {
    check(in.zero.species, "input " + in.label);
    check(in.one.species, "input " + in.label);
    if (in.zero.species == in.one.species)
      throw ValidationError("input " + in.label + " uses one species for both bits");
  }
  for (const auto& out : outputs) {
    check(out.zero, "output " + out.label);
    check(out.one, "output " + out.label);
  }
}

namespace {

std::string term_text(const Alphabet& a, const Term& t) { return a.name(t.species) + "=" + std::to_string(t.count); }

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

} // namespace

std::string serialize(const StepProgram& p) {
  std::ostringstream out;
  out << "alphabet:";
  for (const auto& n : p.alphabet.names())
    out << ' ' << n;
  out << "\nrules:\n";
  for (const Rule& r : p.rules)
    out << r.to_string(p.alphabet) << '\n';
  for (std::size_t k = 0; k < p.steps.size(); ++k) {
    out << "step " << k << ":";
    for (std::size_t i = 0; i < p.steps[k].size(); ++i)
      out << (i ? ", " : " ") << term_text(p.alphabet, p.steps[k][i]);
    out << '\n';
  }
  out << "inputs:\n";
  for (const auto& in : p.inputs)
    out << in.label << " 0:" << term_text(p.alphabet, in.zero) << " 1:" << term_text(p.alphabet, in.one) << '\n';
  out << "outputs:\n";
  for (const auto& o : p.outputs)
    out << o.label << " 0:" << p.alphabet.name(o.zero) << " 1:" << p.alphabet.name(o.one) << '\n';
  return out.str();
}

StepProgram parse_program(std::string_view text) {
  enum class Section { None, Rules, Inputs, Outputs } section = Section::None;
  StepProgram p;
  std::vector<std::string> rule_lines;
  std::size_t line_no = 0;
  bool saw_alphabet = false;

  auto fail = [&](const std::string& what, std::size_t column = 1) -> void {
    throw ParseError(what, line_no, column);
  };

  // "name=count" against the alphabet.
  auto parse_term = [&](std::string_view tok, std::size_t column) {
    const auto eq = tok.rfind('=');
    if (eq == std::string_view::npos || eq == 0)
      fail("expected <species>=<count>", column);
    const std::string name(tok.substr(0, eq));
    const std::string count(tok.substr(eq + 1));
    if (count.empty() || !std::all_of(count.begin(), count.end(), ::isdigit))
      fail("bad count '" + count + "'", column + eq + 1);
    if (!p.alphabet.contains(name))
      fail("species '" + name + "' not in alphabet", column);
    Term t{p.alphabet.at(name), 0};
    try {
      t.count = std::stoull(count);
    } catch (const std::exception&) {
      fail("count out of range", column + eq + 1);
    }
    return t;
  };

  auto species_ref = [&](std::string_view tok, std::size_t column) {
    if (!p.alphabet.contains(tok))
      fail("species '" + std::string(tok) + "' not in alphabet", column);
    return p.alphabet.at(tok);
  };

  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#')
      continue;
    const std::size_t indent = raw.find_first_not_of(" \t") + 1;

    if (line.rfind("alphabet:", 0) == 0) {
      if (saw_alphabet)
        fail("duplicate alphabet section", indent);
      saw_alphabet = true;
      std::istringstream names(line.substr(9));
      for (std::string n; names >> n;) {
        if (p.alphabet.contains(n))
          fail("duplicate species '" + n + "'", indent);
        p.alphabet.intern(n);
      }
      section = Section::None;
      continue;
    }
    if (!saw_alphabet)
      fail("expected 'alphabet:' first", indent);
    if (line == "rules:") {
      section = Section::Rules;
      continue;
    }
    if (line == "inputs:") {
      section = Section::Inputs;
      continue;
    }
    if (line == "outputs:") {
      section = Section::Outputs;
      continue;
    }
    if (line.rfind("step ", 0) == 0) {
      section = Section::None;
      const auto colon = line.find(':');
      if (colon == std::string::npos)
        fail("step line needs ':'", indent);
      const std::string idx = trim(line.substr(5, colon - 5));
      if (idx.empty() || !std::all_of(idx.begin(), idx.end(), ::isdigit) || std::stoull(idx) != p.steps.size())
        fail("steps must be numbered 0, 1, ... in order", indent + 5);
      std::vector<Term> add;
      const std::string body = line.substr(colon + 1);
      std::size_t start = 0;
      while (start <= body.size()) {
        auto comma = body.find(',', start);
        if (comma == std::string::npos)
          comma = body.size();
        const std::string tok = trim(std::string_view(body).substr(start, comma - start));
        if (!tok.empty())
          add.push_back(parse_term(tok, indent + colon + 1 + start));
        else if (comma != body.size())
          fail("empty entry in step", indent + colon + 1 + start);
        start = comma + 1;
      }
      p.steps.push_back(std::move(add));
      continue;
    }

    switch (section) {
    case Section::Rules:
      try {
        Alphabet scratch = p.alphabet;
        Rule r = parse_rule(line, scratch);
        if (scratch.size() != p.alphabet.size())
          fail("rule uses species not in alphabet", indent);
        p.rules.push_back(std::move(r));
      } catch (const ParseError& e) {
        fail(e.reason(), indent + e.column() - 1);
      } catch (const Error& e) {
        fail(e.what(), indent);
      }
      break;
    case Section::Inputs:
    case Section::Outputs: {
      std::istringstream fields(line);
      std::string label, f0, f1, extra;
      fields >> label >> f0 >> f1;
      if (f1.empty() || (fields >> extra))
        fail("expected '<label> 0:<...> 1:<...>'", indent);
      if (f0.rfind("0:", 0) != 0 || f1.rfind("1:", 0) != 0)
        fail("expected '0:' then '1:' fields", indent + label.size() + 1);
      const std::size_t c0 = indent + label.size() + 1;
      const std::size_t c1 = c0 + f0.size() + 1;
      if (section == Section::Inputs)
        p.inputs.push_back({label, parse_term(f0.substr(2), c0 + 2), parse_term(f1.substr(2), c1 + 2)});
      else
        p.outputs.push_back({label, species_ref(f0.substr(2), c0 + 2), species_ref(f1.substr(2), c1 + 2)});
      break;
    }
    case Section::None:
      fail("unexpected line '" + line + "'", indent);
    }
  }
  if (!saw_alphabet)
    throw ParseError("missing 'alphabet:' section", line_no + 1, 1);
  try {
    p.validate();
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), line_no, 1);
  }
  return p;
}

std::vector<bool> parse_bits(std::string_view text) {
  std::vector<bool> bits;
  for (char c : text) {
    if (c != '0' && c != '1')
      throw ValidationError("input bits must be 0 or 1, got '" + std::string(1, c) + "'");
    bits.push_back(c == '1');
  }
  return bits;
}

std::string format_bits(const std::vector<bool>& bits) {
  std::string s;
  for (bool b : bits)
    s += b ? '1' : '0';
  return s;
}

} // namespace stepcrn
