#include "tspower_cli/config.hpp"

#include <cmath>
#include <string>

#include "tspower/errors.hpp"
#include "tspower/json_io.hpp"

namespace tspower::cli {

namespace {

using nlohmann::json;

double number_at(const json& obj, const char* key, const std::string& path, double fallback,
                 bool required) {
  if (!obj.contains(key)) {
    if (required) throw ParseError(path + "/" + key, "missing required field");
    return fallback;
  }
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ParseError(path + "/" + key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ParseError(path + "/" + key, "must be finite");
  return x;
}

SourceTone parse_tone(const json& obj, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path, "expected an object");
  SourceTone tone;
  tone.amplitude_peak = number_at(obj, "amplitude_peak", path, 0.0, true);
  tone.omega = number_at(obj, "omega", path, 0.0, true);
  tone.phase = number_at(obj, "phase", path, 0.0, false);
  if (tone.omega < 0.0) throw ParseError(path + "/omega", "must be >= 0");
  return tone;
}

std::vector<double> number_array(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) throw ParseError(path, "expected a nonempty array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!v[k].is_number()) throw ParseError(path + "/" + std::to_string(k), "expected a number");
    out.push_back(v[k].get<double>());
  }
  return out;
}

}  // namespace

OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  if (text == "both") return OutputFormat::both;
  throw ParseError("/output/format", "expected csv, json or both, got '" + text + "'");
}

AnalysisConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ParseError("", "config must be a JSON object");
  AnalysisConfig cfg;

  if (!doc.contains("netlist")) throw ParseError("/netlist", "missing required field");
  const auto& netlist = doc.at("netlist");
  if (netlist.is_string()) {
    cfg.netlist_path = base_dir / netlist.get<std::string>();
  } else if (netlist.is_object()) {
    cfg.netlist_inline = netlist;
  } else {
    throw ParseError("/netlist", "expected a file path or an inline netlist object");
  }

  if (!doc.contains("source")) throw ParseError("/source", "missing required field");
  const auto& source = doc.at("source");
  if (!source.is_object()) throw ParseError("/source", "expected an object");
  if (source.contains("tones")) {
    const auto& tones = source.at("tones");
    if (!tones.is_array()) throw ParseError("/source/tones", "expected an array");
    for (std::size_t k = 0; k < tones.size(); ++k) {
      cfg.tones.push_back(parse_tone(tones[k], "/source/tones/" + std::to_string(k)));
    }
  }
  if (source.contains("am")) {
    const auto& am = source.at("am");
    if (!am.is_object()) throw ParseError("/source/am", "expected an object");
    if (!am.contains("carrier")) throw ParseError("/source/am/carrier", "missing required field");
    AmShorthand shorthand;
    shorthand.carrier = parse_tone(am.at("carrier"), "/source/am/carrier");
    shorthand.depth = number_at(am, "depth", "/source/am", 0.0, true);
    shorthand.mod_omega = number_at(am, "mod_omega", "/source/am", 0.0, true);
    if (shorthand.mod_omega < 0.0) throw ParseError("/source/am/mod_omega", "must be >= 0");
    cfg.am = shorthand;
  }

  if (doc.contains("grid")) {
    const auto& grid = doc.at("grid");
    if (!grid.is_object()) throw ParseError("/grid", "expected an object");
    if (grid.contains("t_points")) {
      const auto& v = grid.at("t_points");
      if (!v.is_number_integer() || v.get<long long>() < 1) {
        throw ParseError("/grid/t_points", "expected a positive integer");
      }
      cfg.t_points = v.get<std::size_t>();
    }
    if (grid.contains("t_values")) cfg.t_values = number_array(grid.at("t_values"), "/grid/t_values");
    if (grid.contains("s_values")) {
      cfg.s_values = number_array(grid.at("s_values"), "/grid/s_values");
      for (std::size_t k = 0; k < cfg.s_values->size(); ++k) {
        const double s = (*cfg.s_values)[k];
        if (!(s >= 0.0) || !std::isfinite(s)) {
          throw ParseError("/grid/s_values/" + std::to_string(k), "must be finite and >= 0");
        }
      }
    }
  }

  if (doc.contains("output")) {
    const auto& output = doc.at("output");
    if (!output.is_object()) throw ParseError("/output", "expected an object");
    if (output.contains("dir")) {
      if (!output.at("dir").is_string()) throw ParseError("/output/dir", "expected a string");
      cfg.output_dir = base_dir / output.at("dir").get<std::string>();
    }
    if (output.contains("format")) {
      if (!output.at("format").is_string()) throw ParseError("/output/format", "expected a string");
      cfg.format = parse_format(output.at("format").get<std::string>());
    }
  }

  if (doc.contains("verify")) {
    cfg.tolerance = number_at(doc.at("verify"), "tolerance", "/verify", cfg.tolerance, false);
    if (cfg.tolerance < 0.0) throw ParseError("/verify/tolerance", "must be >= 0");
  }
  return cfg;
}

AnalysisConfig load_config(const std::filesystem::path& path) {
  const auto doc = read_json_file(path);
  try {
    return config_from_json(doc, path.parent_path());
  } catch (const ParseError& e) {
    throw ParseError(e.path(), e.message() + " (in " + path.string() + ")");
  }
}

std::vector<SourceTone> expand_am(const AmShorthand& am) {
  const double side = 0.5 * am.depth * am.carrier.amplitude_peak;
  return {
      {side, am.carrier.omega - am.mod_omega, am.carrier.phase},
      am.carrier,
      {side, am.carrier.omega + am.mod_omega, am.carrier.phase},
  };
}

LineSpectrum build_source(const AnalysisConfig& cfg) {
  std::vector<SourceTone> tones = cfg.tones;
  if (cfg.am) {
    const auto expanded = expand_am(*cfg.am);
    tones.insert(tones.end(), expanded.begin(), expanded.end());
  }
  // cos(-w t + phi) = cos(w t - phi): fold any negative sideband.
  LineSpectrum source = LineSpectrum().with_unit(Unit::volt);
  for (const auto& tone : tones) {
    const double omega = std::abs(tone.omega);
    const double phase = tone.omega < 0.0 ? -tone.phase : tone.phase;
    source = source + LineSpectrum::cosine(omega, tone.amplitude_peak, phase, Unit::volt);
  }
  return source;
}

Netlist build_netlist(const AnalysisConfig& cfg) {
  if (cfg.netlist_inline) {
    try {
      return netlist_from_json(*cfg.netlist_inline);
    } catch (const ParseError& e) {
      throw ParseError("/netlist" + e.path(), e.message());
    }
  }
  return load_netlist(*cfg.netlist_path);
}

}  // namespace tspower::cli
