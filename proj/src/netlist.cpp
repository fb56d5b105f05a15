#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "stepcrn/circuit.hpp"

namespace stepcrn {

namespace {

GateId parse_id(const std::string& tok, std::size_t line, std::size_t column) {
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(), ::isdigit))
    throw ParseError("expected gate id, got '" + tok + "'", line, column);
  unsigned long long v = 0;
  try {
    v = std::stoull(tok);
  } catch (const std::exception&) {
    throw ParseError("gate id out of range", line, column);
  }
  if (v == 0 || v > 0xffffffffULL)
    throw ParseError("gate id must be in 1..4294967295", line, column);
  return static_cast<GateId>(v);
}

// Whitespace tokens with their 1-based columns.
std::vector<std::pair<std::string, std::size_t>> tokenize(const std::string& line) {
  std::vector<std::pair<std::string, std::size_t>> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    if (i >= line.size())
      break;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    out.emplace_back(line.substr(start, i - start), start + 1);
  }
  return out;
}

Circuit parse_text(std::string_view text) {
  std::string name = "circuit";
  std::vector<Gate> gates;
  std::vector<GateId> outputs;
  bool saw_outputs = false;
  std::size_t line_no = 0;

  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos)
      raw.erase(hash);
    const auto toks = tokenize(raw);
    if (toks.empty())
      continue;
    const auto& [kw, col] = toks[0];
    if (kw == "circuit") {
      if (toks.size() != 2)
        throw ParseError("expected 'circuit <name>'", line_no, col);
      name = toks[1].first;
    } else if (kw == "gate") {
      if (saw_outputs)
        throw ParseError("gate after outputs line", line_no, col);
      if (toks.size() < 3)
        throw ParseError("expected 'gate <id> <KIND> [inputs...]'", line_no, col);
      Gate g;
      g.id = parse_id(toks[1].first, line_no, toks[1].second);
      auto kind = parse_gate_kind(toks[2].first);
      if (!kind)
        throw ParseError("unknown gate kind '" + toks[2].first + "'", line_no, toks[2].second);
      g.kind = *kind;
      for (std::size_t i = 3; i < toks.size(); ++i)
        g.inputs.push_back(parse_id(toks[i].first, line_no, toks[i].second));
      gates.push_back(std::move(g));
    } else if (kw == "outputs") {
      if (saw_outputs)
        throw ParseError("duplicate outputs line", line_no, col);
      saw_outputs = true;
      for (std::size_t i = 1; i < toks.size(); ++i)
        outputs.push_back(parse_id(toks[i].first, line_no, toks[i].second));
    } else {
      throw ParseError("unexpected '" + kw + "'", line_no, col);
    }
  }
  if (!saw_outputs)
    throw ParseError("missing outputs line", line_no + 1, 1);
  return Circuit(std::move(name), std::move(gates), std::move(outputs));
}

Circuit parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // byte offset -> line/column
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("invalid JSON", line, column);
  }
  try {
    std::vector<Gate> gates;
    for (const auto& jg : doc.at("gates")) {
      Gate g;
      g.id = jg.at("id").get<GateId>();
      auto kind = parse_gate_kind(jg.at("kind").get<std::string>());
      if (!kind)
        throw ValidationError("unknown gate kind '" + jg.at("kind").get<std::string>() + "'");
      g.kind = *kind;
      if (jg.contains("inputs"))
        g.inputs = jg.at("inputs").get<std::vector<GateId>>();
      gates.push_back(std::move(g));
    }
    return Circuit(doc.value("name", std::string("circuit")), std::move(gates),
                   doc.at("outputs").get<std::vector<GateId>>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed circuit JSON: ") + e.what(), 1, 1);
  }
}

} // namespace

Circuit parse_circuit(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{')
    return parse_json(text);
  return parse_text(text);
}

std::string to_netlist(const Circuit& circuit) {
  std::ostringstream out;
  out << "circuit " << circuit.name() << '\n';
  for (const Gate& g : circuit.gates()) {
    out << "gate " << g.id << ' ' << to_string(g.kind);
    for (GateId in : g.inputs)
      out << ' ' << in;
    out << '\n';
  }
  out << "outputs";
  for (GateId o : circuit.outputs())
    out << ' ' << o;
  out << '\n';
  return out.str();
}

std::string to_json(const Circuit& circuit) {
  nlohmann::json doc;
  doc["name"] = circuit.name();
  doc["gates"] = nlohmann::json::array();
  for (const Gate& g : circuit.gates())
    doc["gates"].push_back({{"id", g.id}, {"kind", std::string(to_string(g.kind))}, {"inputs", g.inputs}});
  doc["outputs"] = circuit.outputs();
  return doc.dump(2) + "\n";
}

} // namespace stepcrn
