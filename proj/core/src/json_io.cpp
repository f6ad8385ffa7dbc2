#include "tspower/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "tspower/errors.hpp"

namespace tspower {

namespace {

using nlohmann::json;

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path + "/" + key, "missing required field");
  return *it;
}

std::string require_string(const json& obj, const std::string& key, const std::string& path) {
  const auto& v = require(obj, key, path);
  if (!v.is_string()) throw ParseError(path + "/" + key, "expected a string");
  return v.get<std::string>();
}

double require_number(const json& obj, const std::string& key, const std::string& path) {
  const auto& v = require(obj, key, path);
  if (!v.is_number()) throw ParseError(path + "/" + key, "expected a number");
  return v.get<double>();
}

BranchKind parse_kind(const std::string& text, const std::string& path) {
  if (text == "resistor" || text == "R") return BranchKind::resistor;
  if (text == "inductor" || text == "L") return BranchKind::inductor;
  if (text == "capacitor" || text == "C") return BranchKind::capacitor;
  throw ParseError(path, "unknown branch kind '" + text + "'");
}

}  // namespace

nlohmann::json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::ostringstream msg;
    msg << "JSON syntax error at byte " << e.byte << ": " << e.what();
    throw ParseError("", msg.str());
  }
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("", "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_json_text(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError("", e.message() + " (in " + path.string() + ")");
  }
}

Netlist netlist_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ParseError("", "netlist must be a JSON object");
  const auto& branches_json = require(doc, "branches", "");
  if (!branches_json.is_array()) throw ParseError("/branches", "expected an array");

  std::vector<Branch> branches;
  for (std::size_t k = 0; k < branches_json.size(); ++k) {
    const std::string path = "/branches/" + std::to_string(k);
    const auto& item = branches_json[k];
    Branch b;
    b.id = require_string(item, "id", path);
    b.kind = parse_kind(require_string(item, "kind", path), path + "/kind");
    b.value = require_number(item, "value", path);
    if (!(b.value > 0.0) || !std::isfinite(b.value)) {
      throw ParseError(path + "/value", "must be finite and > 0");
    }
    const auto& nodes = require(item, "nodes", path);
    if (!nodes.is_array() || nodes.size() != 2 || !nodes[0].is_string() || !nodes[1].is_string()) {
      throw ParseError(path + "/nodes", "expected two node labels");
    }
    b.node_a = nodes[0].get<std::string>();
    b.node_b = nodes[1].get<std::string>();
    if (b.node_a == b.node_b) throw ParseError(path + "/nodes", "branch connects a node to itself");
    branches.push_back(std::move(b));
  }

  const auto& port_json = require(doc, "port", "");
  Port port{require_string(port_json, "plus", "/port"), require_string(port_json, "ground", "/port")};

  try {
    return Netlist(std::move(branches), std::move(port));
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    const bool about_port = what.find("port") != std::string::npos ||
                            what.find("ground") != std::string::npos;
    throw ParseError(about_port ? "/port" : "/branches", what);
  }
}

Netlist load_netlist(const std::filesystem::path& path) {
  const auto doc = read_json_file(path);
  try {
    return netlist_from_json(doc);
  } catch (const ParseError& e) {
    throw ParseError(e.path(), e.message() + " (in " + path.string() + ")");
  }
}

nlohmann::json to_json(const Netlist& net) {
  json branches = json::array();
  for (const auto& b : net.branches()) {
    branches.push_back(
        {{"id", b.id}, {"kind", to_string(b.kind)}, {"value", b.value}, {"nodes", {b.node_a, b.node_b}}});
  }
  return {{"branches", branches}, {"port", {{"plus", net.port().plus}, {"ground", net.port().ground}}}};
}

LineSpectrum spectrum_from_json(const nlohmann::json& doc, Unit unit) {
  if (!doc.is_array()) throw ParseError("", "spectrum must be an array of {omega, re, im}");
  std::vector<SpectralLine> lines;
  for (std::size_t k = 0; k < doc.size(); ++k) {
    const std::string path = "/" + std::to_string(k);
    SpectralLine line;
    line.omega = require_number(doc[k], "omega", path);
    const double re = require_number(doc[k], "re", path);
    const double im = doc[k].contains("im") ? require_number(doc[k], "im", path) : 0.0;
    line.amplitude = {re, im};
    lines.push_back(line);
  }
  try {
    return LineSpectrum(std::move(lines), unit);
  } catch (const IncommensurateError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ParseError("", e.what());
  }
}

nlohmann::json to_json(const LineSpectrum& f) {
  json out = json::array();
  for (const auto& line : f.lines()) {
    out.push_back({{"omega", line.omega}, {"re", line.amplitude.real()}, {"im", line.amplitude.imag()}});
  }
  return out;
}

}  // namespace tspower
