#pragma once

// JSON forms of netlists and line spectra.
//
// Netlist:  { "branches": [ {"id", "kind", "value", "nodes": [a, b]} ... ],
//             "port": {"plus", "ground"} }
// Spectrum: [ {"omega", "re", "im"} ... ]
//
// Errors are reported as ParseError carrying the JSON pointer of the
// offending element.

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "tspower/network.hpp"
#include "tspower/spectrum.hpp"

namespace tspower {

/// Parses `text`; syntax errors carry the byte offset in the message.
nlohmann::json parse_json_text(const std::string& text);

nlohmann::json read_json_file(const std::filesystem::path& path);

Netlist netlist_from_json(const nlohmann::json& doc);
Netlist load_netlist(const std::filesystem::path& path);
nlohmann::json to_json(const Netlist& net);

LineSpectrum spectrum_from_json(const nlohmann::json& doc, Unit unit = Unit::none);
nlohmann::json to_json(const LineSpectrum& f);

}  // namespace tspower
