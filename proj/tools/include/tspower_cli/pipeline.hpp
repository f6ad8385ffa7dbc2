#pragma once

// Batch analysis: solve, evaluate every power quantity, check the balances,
// and write plot-ready CSV and JSON.

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tspower/network.hpp"
#include "tspower/power.hpp"
#include "tspower_cli/config.hpp"

namespace tspower::cli {

enum class LoadCharacter { inductive, capacitive, balanced };

const char* to_string(LoadCharacter c) noexcept;

/// sign(Q_B), with |Q_B| < 1e-9 S reported as balanced.
LoadCharacter load_character(double q_budeanu, double apparent);

struct Analysis {
  NetworkSolution solution;
  InstantaneousSet instantaneous;
  RealImaginaryPower real_imaginary;
  ScaledQuantities scaled;
  ClassicalSummary classical;
  BalanceReport balance;
  LoadCharacter character = LoadCharacter::balanced;
};

TimeScaleGrid grid_for(const AnalysisConfig& cfg, const LineSpectrum& source);

Analysis analyze(const AnalysisConfig& cfg);

nlohmann::json summary_json(const Analysis& a);
nlohmann::json balance_json(const BalanceReport& r);

/// Fixed "%.17g" formatting used by every CSV cell.
std::string format_number(double x);

/// Writes instantaneous.csv, scaled_s<value>.csv, summary.json and
/// balance.json per cfg.format. Returns the written paths.
std::vector<std::filesystem::path> run_analyze(const AnalysisConfig& cfg);

/// Writes sweep.csv: s, time-mean of X(t, s), time-mean of Q(t, s).
std::filesystem::path run_sweep_s(const AnalysisConfig& cfg);

/// True iff every balance residual is below `tolerance` (relative) and the
/// Budeanu routes agree. One verdict line per check goes to `out`.
bool run_verify(const AnalysisConfig& cfg, double tolerance, std::ostream& out);

}  // namespace tspower::cli
