#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tspower/errors.hpp"
#include "tspower_cli/config.hpp"
#include "tspower_cli/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace tspower::cli {
namespace {

const fs::path kConfigs = TSPOWER_CONFIG_DIR;

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("tspower_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json resistive_doc() {
  return json::parse(R"({
    "netlist": {"branches": [{"id": "R1", "kind": "R", "value": 5, "nodes": ["p", "0"]}],
                "port": {"plus": "p", "ground": "0"}},
    "source": {"tones": [{"amplitude_peak": 10, "omega": 2}]}
  })");
}

std::string parse_error_path(const json& doc) {
  try {
    config_from_json(doc, ".");
  } catch (const ParseError& e) {
    return e.path();
  }
  return "<no error>";
}

TEST(Config, Defaults) {
  const auto cfg = config_from_json(resistive_doc(), ".");
  EXPECT_EQ(cfg.format, OutputFormat::both);
  EXPECT_EQ(cfg.output_dir, fs::path("out"));
  EXPECT_DOUBLE_EQ(cfg.tolerance, 1e-9);
  ASSERT_EQ(cfg.tones.size(), 1u);
  EXPECT_DOUBLE_EQ(cfg.tones[0].phase, 0.0);
}

TEST(Config, ErrorsCarryJsonPaths) {
  auto doc = resistive_doc();
  doc.erase("source");
  EXPECT_EQ(parse_error_path(doc), "/source");

  doc = resistive_doc();
  doc["source"]["tones"][0]["omega"] = "fast";
  EXPECT_EQ(parse_error_path(doc), "/source/tones/0/omega");

  doc = resistive_doc();
  doc["grid"] = {{"s_values", {0.0, -1.0}}};
  EXPECT_EQ(parse_error_path(doc), "/grid/s_values/1");

  doc = resistive_doc();
  doc["output"] = {{"format", "xml"}};
  EXPECT_EQ(parse_error_path(doc), "/output/format");

  doc = resistive_doc();
  doc["netlist"]["branches"][0]["value"] = -1.0;
  EXPECT_THROW(build_netlist(config_from_json(doc, ".")), ParseError);
  try {
    build_netlist(config_from_json(doc, "."));
  } catch (const ParseError& e) {
    EXPECT_EQ(e.path(), "/netlist/branches/0/value");
  }
}

TEST(Config, MissingFileAndBadSyntax) {
  EXPECT_THROW(load_config("/nonexistent/config.json"), ParseError);
  const auto dir = scratch("syntax");
  std::ofstream(dir / "bad.json") << "{\"netlist\": ";
  EXPECT_THROW(load_config(dir / "bad.json"), ParseError);
}

TEST(Config, AmExpansion) {
  const AmShorthand am{{2.0, 1.0, 0.3}, 0.1, 0.2};
  const auto tones = expand_am(am);
  ASSERT_EQ(tones.size(), 3u);
  double total = 0.0;
  for (const auto& t : tones) total += t.amplitude_peak;
  EXPECT_NEAR(total, 2.2, 1e-15);

  const auto cfg = load_config(kConfigs / "flicker.json");
  const auto u = build_source(cfg);
  for (double t : {0.0, 1.3, 7.0}) {
    const double expected = 10.0 * std::sqrt(2.0) * (1.0 + 0.1 * std::cos(0.2 * t)) * std::cos(t);
    EXPECT_NEAR(evaluate(u, t), expected, 1e-12);
  }
  EXPECT_EQ(u.unit(), Unit::volt);
}

TEST(Config, NetlistPathResolvesRelativeToConfig) {
  const auto cfg = load_config(kConfigs / "flicker.json");
  ASSERT_TRUE(cfg.netlist_path.has_value());
  EXPECT_EQ(build_netlist(cfg).branches().size(), 2u);
}

TEST(Pipeline, FlickerSummary) {
  const auto a = analyze(load_config(kConfigs / "flicker.json"));
  EXPECT_NEAR(a.classical.p_avg, 10.05, 1e-10);
  EXPECT_NEAR(a.classical.q_budeanu, -30.15, 1e-10);
  EXPECT_EQ(a.character, LoadCharacter::capacitive);
  const auto j = summary_json(a);
  EXPECT_EQ(j.at("character"), "capacitive");
  EXPECT_NEAR(j.at("p_avg").get<double>(), 10.05, 1e-10);
}

TEST(Pipeline, LoadCharacterThresholds) {
  EXPECT_EQ(load_character(1.0, 10.0), LoadCharacter::inductive);
  EXPECT_EQ(load_character(-1.0, 10.0), LoadCharacter::capacitive);
  EXPECT_EQ(load_character(1e-12, 10.0), LoadCharacter::balanced);
}

TEST(Pipeline, FormatNumber) {
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
}

TEST(Pipeline, AnalyzeWritesFilesWithHeaders) {
  auto cfg = load_config(kConfigs / "series_rlc.json");
  cfg.output_dir = scratch("analyze");
  cfg.s_values = std::vector<double>{0.0, 0.5};
  const auto files = run_analyze(cfg);
  ASSERT_EQ(files.size(), 5u);
  std::string header;
  std::ifstream(cfg.output_dir / "instantaneous.csv") >> header;
  EXPECT_EQ(header, "t,p,p_d,w_m,w_e,w,x,P_t,Q_t");
  std::ifstream(cfg.output_dir / "scaled_s0.5.csv") >> header;
  EXPECT_EQ(header, "t,W_m,W_e,W,X,P,Q,P_d");
  const auto summary = json::parse(slurp(cfg.output_dir / "summary.json"));
  EXPECT_TRUE(summary.contains("residuals"));
  const auto balance = json::parse(slurp(cfg.output_dir / "balance.json"));
  EXPECT_FALSE(balance.empty());

  cfg.output_dir = scratch("analyze_json");
  cfg.format = OutputFormat::json;
  EXPECT_EQ(run_analyze(cfg).size(), 2u);
}

TEST(Pipeline, AnalyzeIsDeterministic) {
  auto cfg = load_config(kConfigs / "flicker.json");
  cfg.output_dir = scratch("det_a");
  const auto a = run_analyze(cfg);
  cfg.output_dir = scratch("det_b");
  const auto b = run_analyze(cfg);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].filename(), b[k].filename());
    EXPECT_EQ(slurp(a[k]), slurp(b[k])) << a[k];
  }
}

TEST(Pipeline, SweepSlopeMatchesMeanQ) {
  auto cfg = load_config(kConfigs / "series_rlc.json");
  cfg.output_dir = scratch("sweep");
  const double h = 1e-6;
  cfg.s_values = std::vector<double>{0.0, h, 2.0 * h};
  std::ifstream in(run_sweep_s(cfg));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "s,mean_X,mean_Q");
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  ASSERT_EQ(rows.size(), 3u);
  const double slope = (-3.0 * rows[0][1] + 4.0 * rows[1][1] - rows[2][1]) / (2.0 * h);
  EXPECT_NEAR(-slope, rows[0][2], 1e-5 * std::abs(rows[0][2]));
}

TEST(Pipeline, VerifyReportsVerdicts) {
  const auto cfg = load_config(kConfigs / "series_rlc.json");
  std::ostringstream out;
  EXPECT_TRUE(run_verify(cfg, 1e-9, out));
  EXPECT_NE(out.str().find("PASS reactive balance"), std::string::npos);
  std::ostringstream strict;
  EXPECT_FALSE(run_verify(cfg, 0.0, strict));
  EXPECT_NE(strict.str().find("worst at"), std::string::npos);
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + TSPOWER_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Executable, ExitCodes) {
  const auto out = scratch("exe");
  const std::string flicker = (kConfigs / "flicker.json").string();
  EXPECT_EQ(run_cli("verify --config " + flicker), 0);
  EXPECT_EQ(run_cli("verify --config " + flicker + " --tol 0"), 3);
  EXPECT_EQ(run_cli("analyze --config " + flicker + " --out " + (out / "a").string()), 0);
  EXPECT_TRUE(fs::exists(out / "a" / "summary.json"));
  EXPECT_EQ(run_cli("analyze --config /nonexistent.json"), 2);
  EXPECT_EQ(run_cli("analyze"), 2);
  EXPECT_EQ(run_cli("bogus"), 2);

  // Node between two capacitors floats at DC.
  std::ofstream(out / "singular.json") << R"({
    "netlist": {"branches": [{"id": "C1", "kind": "C", "value": 1, "nodes": ["p", "a"]},
                             {"id": "C2", "kind": "C", "value": 1, "nodes": ["a", "0"]}],
                "port": {"plus": "p", "ground": "0"}},
    "source": {"tones": [{"amplitude_peak": 1, "omega": 0}]}
  })";
  EXPECT_EQ(run_cli("analyze --config " + (out / "singular.json").string() + " --out " + (out / "s").string()),
            3);

  std::ofstream(out / "incommensurate.json") << R"({
    "netlist": {"branches": [{"id": "R1", "kind": "R", "value": 1, "nodes": ["p", "0"]}],
                "port": {"plus": "p", "ground": "0"}},
    "source": {"tones": [{"amplitude_peak": 1, "omega": 1}, {"amplitude_peak": 1, "omega": 3.14159265358979}]}
  })";
  EXPECT_EQ(run_cli("verify --config " + (out / "incommensurate.json").string()), 2);
}

}  // namespace
}  // namespace tspower::cli
