#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "tspower/network.hpp"
#include "tspower/spectrum.hpp"

namespace tspower::cli {

struct SourceTone {
  double amplitude_peak = 0.0;  // V
  double omega = 0.0;           // rad/s
  double phase = 0.0;           // rad
};

/// carrier * (1 + depth cos(mod_omega t)).
struct AmShorthand {
  SourceTone carrier;
  double depth = 0.0;
  double mod_omega = 0.0;
};

enum class OutputFormat { csv, json, both };

OutputFormat parse_format(const std::string& text);

struct AnalysisConfig {
  std::optional<std::filesystem::path> netlist_path;
  std::optional<nlohmann::json> netlist_inline;
  std::vector<SourceTone> tones;
  std::optional<AmShorthand> am;

  std::optional<std::size_t> t_points;
  std::optional<std::vector<double>> t_values;
  std::optional<std::vector<double>> s_values;

  std::filesystem::path output_dir = "out";
  OutputFormat format = OutputFormat::both;
  double tolerance = 1e-9;  // relative, for verify
};

/// Relative paths inside the document resolve against `base_dir`.
AnalysisConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir);
AnalysisConfig load_config(const std::filesystem::path& path);

/// Carrier plus two sidebands of amplitude depth/2 at carrier +- mod_omega.
std::vector<SourceTone> expand_am(const AmShorthand& am);

LineSpectrum build_source(const AnalysisConfig& cfg);
Netlist build_netlist(const AnalysisConfig& cfg);

}  // namespace tspower::cli
