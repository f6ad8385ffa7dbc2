#include "tspower_cli/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "tspower/errors.hpp"
#include "tspower/json_io.hpp"

namespace tspower::cli {

namespace {

using nlohmann::json;

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
      : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot write '" + path.string() + "'");
    row_strings(header);
  }

  void row(const std::vector<double>& values) {
    for (std::size_t k = 0; k < values.size(); ++k) {
      if (k) out_ << ',';
      out_ << format_number(values[k]);
    }
    out_ << '\n';
  }

 private:
  void row_strings(const std::vector<std::string>& values) {
    for (std::size_t k = 0; k < values.size(); ++k) {
      if (k) out_ << ',';
      out_ << values[k];
    }
    out_ << '\n';
  }

  std::ofstream out_;
};

void write_json(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << doc.dump(2) << '\n';
}

json residual_json(const BalanceResidual& r) {
  return {{"max_abs", r.max_abs},
          {"scale", r.scale},
          {"relative", r.relative},
          {"worst_t", r.worst_t},
          {"worst_s", r.worst_s}};
}

std::string scale_label(double s) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", s);
  return buf;
}

}  // namespace

const char* to_string(LoadCharacter c) noexcept {
  switch (c) {
    case LoadCharacter::inductive: return "inductive";
    case LoadCharacter::capacitive: return "capacitive";
    case LoadCharacter::balanced: break;
  }
  return "balanced";
}

LoadCharacter load_character(double q_budeanu, double apparent) {
  if (std::abs(q_budeanu) < 1e-9 * apparent || q_budeanu == 0.0) return LoadCharacter::balanced;
  return q_budeanu > 0.0 ? LoadCharacter::inductive : LoadCharacter::capacitive;
}

std::string format_number(double x) {
  if (x == 0.0) return "0";  // folds -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

TimeScaleGrid grid_for(const AnalysisConfig& cfg, const LineSpectrum& source) {
  TimeScaleGrid grid = TimeScaleGrid::defaults_for(source);
  if (cfg.t_values) {
    grid.t = *cfg.t_values;
  } else if (cfg.t_points) {
    const double period = source.common_period() > 0.0 ? source.common_period() : 2.0 * std::numbers::pi;
    grid.t.clear();
    for (std::size_t k = 0; k < *cfg.t_points; ++k) {
      grid.t.push_back(period * static_cast<double>(k) / static_cast<double>(*cfg.t_points));
    }
  }
  if (cfg.s_values) grid.s = *cfg.s_values;
  return grid;
}

Analysis analyze(const AnalysisConfig& cfg) {
  const Netlist net = build_netlist(cfg);
  const LineSpectrum source = build_source(cfg);
  NetworkSolution solution = solve(net, source);
  InstantaneousSet iset = instantaneous(solution);
  RealImaginaryPower pq = real_imaginary_power(solution.port_voltage(), solution.port_current());
  ScaledQuantities sq = scaled(solution, grid_for(cfg, source));
  ClassicalSummary classical = classical_summary(solution);
  BalanceReport report = balance_report(solution, iset, sq);
  const auto character = load_character(report.budeanu.value, classical.s);
  return Analysis{std::move(solution), std::move(iset), std::move(pq), std::move(sq),
                  std::move(classical), report, character};
}

json balance_json(const BalanceReport& r) {
  return {
      {"instantaneous", residual_json(r.instantaneous)},
      {"active", residual_json(r.active.residual)},
      {"active_fd_check", {{"step", r.active.fd_step}, {"max_deviation", r.active.fd_max_deviation}}},
      {"reactive", residual_json(r.reactive)},
      {"budeanu",
       {{"from_mean_q", r.budeanu.from_mean_q},
        {"from_scale_derivative", r.budeanu.from_scale_derivative}}},
      {"grid",
       {{"t_points", r.t_points},
        {"s_points", r.s_points},
        {"t_min", r.t_min},
        {"t_max", r.t_max},
        {"s_min", r.s_min},
        {"s_max", r.s_max}}},
  };
}

json summary_json(const Analysis& a) {
  json lines = json::array();
  for (const auto& line : a.classical.lines) {
    lines.push_back({{"omega", line.omega},
                     {"u_rms", line.u_rms},
                     {"i_rms", line.i_rms},
                     {"p", line.p},
                     {"q", line.q}});
  }
  return {
      {"p_avg", a.classical.p_avg},
      {"q_budeanu", a.balance.budeanu.value},
      {"s", a.classical.s},
      {"u_rms", a.classical.u_rms},
      {"i_rms", a.classical.i_rms},
      {"lines", lines},
      {"residuals",
       {{"instantaneous", a.balance.instantaneous.relative},
        {"active", a.balance.active.residual.relative},
        {"reactive", a.balance.reactive.relative}}},
      {"character", to_string(a.character)},
  };
}

std::vector<std::filesystem::path> run_analyze(const AnalysisConfig& cfg) {
  const Analysis a = analyze(cfg);
  std::filesystem::create_directories(cfg.output_dir);
  std::vector<std::filesystem::path> written;

  if (cfg.format != OutputFormat::json) {
    const auto inst_path = cfg.output_dir / "instantaneous.csv";
    {
      CsvWriter csv(inst_path, {"t", "p", "p_d", "w_m", "w_e", "w", "x", "P_t", "Q_t"});
      const auto& is = a.instantaneous;
      for (double t : a.scaled.grid.t) {
        csv.row({t, evaluate(is.p, t), evaluate(is.p_d, t), evaluate(is.w_m, t), evaluate(is.w_e, t),
                 evaluate(is.w, t), evaluate(is.x, t), evaluate(a.real_imaginary.real, t),
                 evaluate(a.real_imaginary.imaginary, t)});
      }
    }
    written.push_back(inst_path);

    const auto& sq = a.scaled;
    std::set<std::string> used;
    for (std::size_t is = 0; is < sq.grid.s.size(); ++is) {
      std::string label = scale_label(sq.grid.s[is]);
      if (!used.insert(label).second) label += "_" + std::to_string(is);
      const auto path = cfg.output_dir / ("scaled_s" + label + ".csv");
      CsvWriter csv(path, {"t", "W_m", "W_e", "W", "X", "P", "Q", "P_d"});
      for (std::size_t it = 0; it < sq.grid.t.size(); ++it) {
        csv.row({sq.grid.t[it], sq.w_m.at(is, it), sq.w_e.at(is, it), sq.w.at(is, it),
                 sq.x.at(is, it), sq.p.at(is, it), sq.q.at(is, it), sq.p_d.at(is, it)});
      }
      written.push_back(path);
    }
  }
  if (cfg.format != OutputFormat::csv) {
    const auto summary_path = cfg.output_dir / "summary.json";
    write_json(summary_path, summary_json(a));
    written.push_back(summary_path);
    const auto balance_path = cfg.output_dir / "balance.json";
    write_json(balance_path, balance_json(a.balance));
    written.push_back(balance_path);
  }
  return written;
}

std::filesystem::path run_sweep_s(const AnalysisConfig& cfg) {
  const Netlist net = build_netlist(cfg);
  const LineSpectrum source = build_source(cfg);
  const NetworkSolution sol = solve(net, source);
  const TimeScaleGrid grid = grid_for(cfg, source);

  // Exact time means: only the non-beating terms survive averaging over t.
  const TimeScaleSeries x = reactive_energy_series(sol);
  const auto port = TimeScaleSeries::analytic_product(sol.port_voltage(), sol.port_current());

  std::filesystem::create_directories(cfg.output_dir);
  const auto path = cfg.output_dir / "sweep.csv";
  CsvWriter csv(path, {"s", "mean_X", "mean_Q"});
  for (double s : grid.s) {
    csv.row({s, x.time_mean(s).real(), 0.5 * port.time_mean(s).imag()});
  }
  return path;
}

bool run_verify(const AnalysisConfig& cfg, double tolerance, std::ostream& out) {
  const Netlist net = build_netlist(cfg);
  const LineSpectrum source = build_source(cfg);
  const NetworkSolution sol = solve(net, source);
  const InstantaneousSet iset = instantaneous(sol);
  const ScaledQuantities sq = scaled(sol, grid_for(cfg, source));

  bool ok = true;
  auto verdict = [&](const char* name, const BalanceResidual& r) {
    const bool pass = r.relative < tolerance;
    ok = ok && pass;
    out << (pass ? "PASS " : "FAIL ") << name << ": max residual " << format_number(r.max_abs)
        << ", relative " << format_number(r.relative) << " (tolerance " << format_number(tolerance)
        << ")";
    if (!pass) {
      out << ", worst at t=" << format_number(r.worst_t) << " s=" << format_number(r.worst_s);
    }
    out << '\n';
  };
  verdict("instantaneous balance dw/dt = p - p_d", instantaneous_balance(iset, sq.grid.t));
  verdict("active balance dW/dt = P - P_d", active_balance(sq).residual);
  verdict("reactive balance -dX/ds = Q", reactive_balance(sq));

  try {
    const auto qb = budeanu(sol);
    out << "PASS Budeanu routes agree: Q_B = " << format_number(qb.value) << " VAr\n";
  } catch (const ConsistencyError& e) {
    ok = false;
    out << "FAIL " << e.what() << '\n';
  }
  return ok;
}

}  // namespace tspower::cli
