// tspower: time-scale power analysis of single-port RLC loads.

#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tspower/errors.hpp"
#include "tspower_cli/config.hpp"
#include "tspower_cli/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

struct CommonOptions {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::string> format;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config, "Analysis config (JSON)")->required();
  cmd->add_option("--out", opts.out, "Output directory (overrides the config)");
  cmd->add_option("--format", opts.format, "csv, json or both")
      ->check(CLI::IsMember({"csv", "json", "both"}));
}

tspower::cli::AnalysisConfig resolve(const CommonOptions& opts) {
  auto cfg = tspower::cli::load_config(opts.config);
  if (opts.out) cfg.output_dir = *opts.out;
  if (opts.format) cfg.format = tspower::cli::parse_format(*opts.format);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Active/reactive power analysis of RLC loads in the time-scale domain"};
  app.require_subcommand(1);

  CommonOptions analyze_opts, sweep_opts, verify_opts;
  std::optional<double> tol;
  auto* analyze = app.add_subcommand("analyze", "Write instantaneous/scaled CSVs and JSON summaries");
  add_common(analyze, analyze_opts);
  auto* sweep = app.add_subcommand("sweep-s", "Write time-means of X and Q versus scale s");
  add_common(sweep, sweep_opts);
  auto* verify = app.add_subcommand("verify", "Check the power balances; nonzero exit on breach");
  add_common(verify, verify_opts);
  verify->add_option("--tol", tol, "Relative tolerance for every balance")
      ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (analyze->parsed()) {
      for (const auto& path : tspower::cli::run_analyze(resolve(analyze_opts))) {
        std::cout << path.string() << '\n';
      }
    } else if (sweep->parsed()) {
      std::cout << tspower::cli::run_sweep_s(resolve(sweep_opts)).string() << '\n';
    } else if (verify->parsed()) {
      const auto cfg = resolve(verify_opts);
      if (!tspower::cli::run_verify(cfg, tol.value_or(cfg.tolerance), std::cout)) {
        return kExitNumeric;
      }
    }
  } catch (const tspower::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const tspower::IncommensurateError& e) {
    std::cerr << "error: incommensurate source: " << e.what() << '\n';
    return kExitInput;
  } catch (const tspower::SingularNetwork& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const tspower::ConsistencyError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
