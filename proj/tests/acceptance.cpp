// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support/random_circuits.hpp"
#include "tspower/oracle.hpp"
#include "tspower/power.hpp"
#include "tspower_cli/config.hpp"
#include "tspower_cli/pipeline.hpp"

namespace fs = std::filesystem;
using namespace tspower;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

struct Verdict {
  bool pass = true;
  std::string detail;
};

// Shared across criteria that apply "on every test case".
struct CaseRecord {
  NetworkSolution sol;
  ScaledQuantities sq;
};

std::vector<CaseRecord>& case_log() {
  static std::vector<CaseRecord> log;
  return log;
}

// Random netlist plus a source it can be driven by, always with an AC line.
std::pair<Netlist, LineSpectrum> draw_case(std::mt19937_64& rng, bool allow_dc) {
  for (;;) {
    auto net = testing::random_netlist(rng);
    testing::SourceOptions opt;
    opt.allow_dc = allow_dc;
    auto source = testing::solvable_source(net, testing::random_source(rng, opt));
    if (source.min_positive_omega() > 0.0) return {std::move(net), std::move(source)};
  }
}

LineSpectrum flicker_source() {
  return cli::build_source(cli::load_config(fs::path(TSPOWER_CONFIG_DIR) / "flicker.json"));
}

Verdict flicker_benchmark() {
  const auto start = Clock::now();
  const auto a = cli::analyze(cli::load_config(fs::path(TSPOWER_CONFIG_DIR) / "flicker.json"));
  const auto summary = cli::summary_json(a);
  const double elapsed = seconds_since(start);
  const double p = summary.at("p_avg").get<double>();
  const double q = summary.at("q_budeanu").get<double>();
  const double ep = std::abs(p - 10.05) / 10.05;
  const double eq = std::abs(q + 30.15) / 30.15;
  const std::string character = summary.at("character").get<std::string>();
  Verdict v;
  v.pass = ep < 1e-6 && eq < 1e-6 && character == "capacitive" && elapsed < 1.0;
  v.detail = "P=" + std::to_string(p) + " W (rel err " + fmt(ep) + "), Q_B=" + std::to_string(q) + " VAr (rel err " + fmt(eq) +
             "), character " + character + ", " + fmt(elapsed) + " s";
  return v;
}

Verdict balance_suite() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20240601);
  double worst_inst = 0.0, worst_active = 0.0, worst_reactive = 0.0;
  for (int k = 0; k < 100; ++k) {
    auto [net, source] = draw_case(rng, k % 2 == 0);
    auto sol = solve(net, source);
    const auto grid = TimeScaleGrid::uniform(source, 21, 21, 10.0 / source.min_positive_omega());
    auto sq = scaled(sol, grid);
    worst_inst = std::max(worst_inst, instantaneous_balance(instantaneous(sol), grid.t).relative);
    worst_active = std::max(worst_active, active_balance(sq).residual.relative);
    worst_reactive = std::max(worst_reactive, reactive_balance(sq).relative);
    case_log().push_back({std::move(sol), std::move(sq)});
  }
  const double elapsed = seconds_since(start);
  Verdict v;
  v.pass = worst_inst < 1e-9 && worst_active < 1e-9 && worst_reactive < 1e-9 && elapsed < 60.0;
  v.detail = "100 netlists on 21x21 grid, worst relative residuals: instantaneous " + fmt(worst_inst) +
             ", active " + fmt(worst_active) + ", reactive " + fmt(worst_reactive) + ", " + fmt(elapsed) + " s";
  return v;
}

Verdict sinusoidal_reduction() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
  double worst_const = 0.0, worst_stored = 0.0, worst_apparent = 0.0;
  for (int k = 0; k < 50; ++k) {
    const auto net = testing::random_netlist(rng);
    const double w = testing::log_uniform(rng, 0.1, 10.0);
    const auto source = LineSpectrum::cosine(w, testing::log_uniform(rng, 0.1, 10.0), phase(rng), Unit::volt);
    auto sol = solve(net, source);
    const auto grid = TimeScaleGrid::uniform(source, 21, 21, 5.0 / w);
    auto sq = scaled(sol, grid);

    const auto& line = sol.per_line().at(0);
    const double ui = std::abs(line.port_voltage) * std::abs(line.port_current) / 2.0;
    const double phi = std::arg(line.port_voltage) - std::arg(line.port_current);
    const double expected_q = ui * std::sin(phi);
    for (std::size_t is = 0; is < grid.s.size(); ++is) {
      for (std::size_t it = 0; it < grid.t.size(); ++it) {
        const double undamped = sq.q.at(is, it) * std::exp(2.0 * w * grid.s[is]);
        worst_const = std::max(worst_const, std::abs(undamped - expected_q) / ui);
      }
    }

    const auto c = classical_summary(sol);
    const auto stored = q_from_stored_energy(sol, w);
    const double q_scale = std::max(std::abs(c.q_budeanu), 2.0 * w * (stored.w_m + stored.w_e));
    worst_stored = std::max(worst_stored, std::abs(stored.q - c.q_budeanu) / q_scale);
    const double s2 = c.s * c.s;
    worst_apparent = std::max(worst_apparent, std::abs(s2 - c.p_avg * c.p_avg - c.q_budeanu * c.q_budeanu) / s2);
    case_log().push_back({std::move(sol), std::move(sq)});
  }
  Verdict v;
  v.pass = worst_const < 1e-10 && worst_stored < 1e-10 && worst_apparent < 1e-10;
  v.detail = "50 single tones: Q e^{2ws} vs UI sin(phi) " + fmt(worst_const) + ", stored-energy Q " +
             fmt(worst_stored) + ", S^2 - P^2 - Q^2 " + fmt(worst_apparent) + " (relative)";
  return v;
}

Verdict zero_scale_limits() {
  double worst_pointwise = 0.0, worst_budeanu = 0.0;
  for (const auto& c : case_log()) {
    const auto pq = real_imaginary_power(c.sol.port_voltage(), c.sol.port_current());
    double scale = 0.0, dev = 0.0;
    for (std::size_t it = 0; it < c.sq.grid.t.size(); ++it) {
      const double t = c.sq.grid.t[it];
      const double p = evaluate(pq.real, t), q = evaluate(pq.imaginary, t);
      scale = std::max({scale, std::abs(p), std::abs(q)});
      dev = std::max({dev, std::abs(c.sq.p.at(0, it) - p), std::abs(c.sq.q.at(0, it) - q)});
    }
    if (scale > 0.0) worst_pointwise = std::max(worst_pointwise, dev / scale);

    const auto b = budeanu(c.sol);
    const double s = classical_summary(c.sol).s;
    // Relative agreement, with an absolute floor for loads whose Q_B is roundoff.
    const double denom = std::max({std::abs(b.from_mean_q), std::abs(b.from_scale_derivative), 1e-4 * s});
    worst_budeanu = std::max(worst_budeanu, std::abs(b.from_mean_q - b.from_scale_derivative) / denom);
  }
  Verdict v;
  v.pass = worst_pointwise < 1e-10 && worst_budeanu < 1e-8 && !case_log().empty();
  v.detail = std::to_string(case_log().size()) + " cases: s=0 vs P(t), Q(t) " + fmt(worst_pointwise) +
             ", Budeanu paths " + fmt(worst_budeanu) + " (relative)";
  return v;
}

Verdict oracle_equivalence() {
  // ODE steady state on dissipative networks.
  std::mt19937_64 rng(4242);
  double worst_ode = 0.0;
  std::size_t unsettled = 0;
  for (int k = 0; k < 20; ++k) {
    const auto net = testing::random_dissipative_netlist(rng);
    testing::SourceOptions opt;
    opt.max_lines = 3;
    opt.max_harmonic = 4;
    opt.base_lo = 0.5;
    opt.base_hi = 2.0;
    const auto source = testing::random_source(rng, opt);
    oracle::OdeOptions ode;
    ode.settle_tolerance = 1e-7;
    const auto r = oracle::ode_steady_state(net, source, 10, ode);
    if (!r.settled) ++unsettled;
    const auto exact = solve(net, source).port_current();
    double peak = 0.0, dev = 0.0;
    for (std::size_t i = 0; i < r.port_current.size(); ++i) {
      const double ref = evaluate(exact, r.port_current.time_at(i));
      peak = std::max(peak, std::abs(ref));
      dev = std::max(dev, std::abs(r.port_current.samples[i] - ref));
    }
    worst_ode = std::max(worst_ode, dev / peak);
  }

  // FFT Hilbert on N = 4096 samples of one period.
  double worst_fft = 0.0;
  std::vector<LineSpectrum> signals{flicker_source()};
  for (int k = 0; k < 20; ++k) signals.push_back(testing::random_source(rng, {}));
  for (const auto& f : signals) {
    const std::size_t n = 4096;
    const auto x = sample(f, 0.0, f.common_period() / n, n);
    const auto h = oracle::fft_hilbert(x);
    const auto exact = hilbert(f);
    double amp = 0.0;
    for (const auto& l : f.lines()) amp += std::abs(l.amplitude);
    for (std::size_t i = 0; i < n; ++i) {
      worst_fft = std::max(worst_fft, std::abs(h.samples[i] - evaluate(exact, h.time_at(i))) / amp);
    }
  }

  // Quadrature: log-log slope of error against window half-width.
  const LineSpectrum f({{1.0, Complex(1.0, 0.5)}, {2.0, 0.3}, {3.0, Complex(0.0, -0.2)}});
  std::string slopes;
  bool slopes_ok = true;
  for (double s : {0.5, 1.0, 2.0}) {
    const ComplexTimePoint p{0.3, s};
    const Complex exact = analytic_at(f, p);
    std::vector<double> lw, le;
    for (double cycles : {16.0, 32.0, 64.0, 128.0}) {
      oracle::QuadratureConfig cfg;
      cfg.half_width = 2.0 * std::numbers::pi * cycles;
      cfg.panels = 1u << 16;
      lw.push_back(std::log(cfg.half_width));
      le.push_back(std::log(std::abs(oracle::quadrature_analytic(f, p, cfg).value - exact)));
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lw.size(); ++i) mx += lw[i] / lw.size(), my += le[i] / le.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lw.size(); ++i) sxy += (lw[i] - mx) * (le[i] - my), sxx += (lw[i] - mx) * (lw[i] - mx);
    const double slope = sxy / sxx;
    slopes_ok = slopes_ok && slope > -1.25 && slope < -0.75;
    slopes += (slopes.empty() ? "" : ", ") + std::string("s=") + fmt(s) + ": " + fmt(slope);
  }

  Verdict v;
  v.pass = worst_ode < 1e-4 && unsettled == 0 && worst_fft < 1e-8 && slopes_ok;
  v.detail = "ODE 20 netlists " + fmt(worst_ode) + " rel (" + std::to_string(unsettled) + " unsettled), FFT N=4096 " +
             fmt(worst_fft) + ", quadrature error slope vs window {" + slopes + "}";
  return v;
}

Verdict decay_property() {
  double worst = 0.0;
  std::size_t checked = 0;
  for (const auto& c : case_log()) {
    const auto& u = c.sol.source();
    if (u.dc() != 0.0) continue;  // a DC line leaves a non-decaying term in X
    const double s_far = 10.0 / u.min_positive_omega();
    const double period = u.common_period();
    double m0 = 0.0, m1 = 0.0;
    const int n = 256;
    for (int k = 0; k < n; ++k) {
      const double t = period * k / n;
      m0 += std::abs(c.sq.x_series.value(t, 0.0).real()) / n;
      m1 += std::abs(c.sq.x_series.value(t, s_far).real()) / n;
    }
    ++checked;
    if (m0 == 0.0) {
      if (m1 != 0.0) worst = std::max(worst, 1.0);
      continue;
    }
    worst = std::max(worst, m1 / m0);
  }
  Verdict v;
  v.pass = worst < std::exp(-10.0) && checked > 0;
  v.detail = std::to_string(checked) + " AC-only cases, worst mean|X(s=10/w_min)| / mean|X(0)| = " + fmt(worst) +
             " (bound " + fmt(std::exp(-10.0)) + ")";
  return v;
}

Verdict budeanu_sign() {
  std::mt19937_64 rng(9);
  std::vector<LineSpectrum> sources{flicker_source()};
  for (int k = 0; k < 10; ++k) sources.push_back(testing::random_source(rng, {}));
  int bad = 0;
  double worst_r = 0.0;
  auto one = [](BranchKind kind, double value) { return Netlist({{"X1", kind, value, "p", "0"}}, {"p", "0"}); };
  for (const auto& u : sources) {
    const double value = testing::log_uniform(rng, 1e-2, 1e2);
    if (!(budeanu(solve(one(BranchKind::inductor, value), u)).value > 0.0)) ++bad;
    if (!(budeanu(solve(one(BranchKind::capacitor, value), u)).value < 0.0)) ++bad;
    const auto sol = solve(one(BranchKind::resistor, value), u);
    const double ratio = std::abs(budeanu(sol).value) / classical_summary(sol).s;
    worst_r = std::max(worst_r, ratio);
  }
  Verdict v;
  v.pass = bad == 0 && worst_r < 1e-12;
  v.detail = std::to_string(sources.size()) + " sources: " + std::to_string(bad) +
             " L/C sign violations, pure R worst |Q_B|/S = " + fmt(worst_r);
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict determinism() {
  auto cfg = cli::load_config(fs::path(TSPOWER_CONFIG_DIR) / "flicker.json");
  const auto root = fs::temp_directory_path() / "tspower_acceptance";
  fs::remove_all(root);
  cfg.output_dir = root / "run1";
  const auto a = cli::run_analyze(cfg);
  cfg.output_dir = root / "run2";
  const auto b = cli::run_analyze(cfg);
  bool same = a.size() == b.size() && !a.empty();
  for (std::size_t k = 0; same && k < a.size(); ++k) {
    same = a[k].filename() == b[k].filename() && slurp(a[k]) == slurp(b[k]);
  }
  fs::remove_all(root);
  return {same, std::to_string(a.size()) + " output files compared byte for byte"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"flicker benchmark", flicker_benchmark},
      {"balance suite", balance_suite},
      {"sinusoidal reduction", sinusoidal_reduction},
      {"s->0 limits", zero_scale_limits},
      {"oracle equivalence", oracle_equivalence},
      {"decay property", decay_property},
      {"Budeanu sign", budeanu_sign},
      {"determinism", determinism},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failures;
    std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
  return failures == 0 ? 0 : 1;
}
