#include "tspower/power.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "tspower/errors.hpp"

namespace tspower {

namespace {

double period_of(const LineSpectrum& source) {
  const double period = source.common_period();
  return period > 0.0 ? period : 2.0 * std::numbers::pi;
}

double relative_of(double max_abs, double scale) {
  if (scale > 0.0) return max_abs / scale;
  return max_abs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

// Tracks the worst |lhs - rhs| and the largest term magnitude.
struct ResidualTracker {
  BalanceResidual r;
  bool any = false;

  void add(double residual, double term_scale, double t, double s) {
    r.scale = std::max(r.scale, term_scale);
    if (!any || residual > r.max_abs) {
      r.max_abs = residual;
      r.worst_t = t;
      r.worst_s = s;
      any = true;
    }
  }

  BalanceResidual finish() {
    r.relative = relative_of(r.max_abs, r.scale);
    return r;
  }
};

// sum_b k_b f^_b conj(f^_b) over branches of `kind`, using voltages or
// currents.
TimeScaleSeries energy_series(const NetworkSolution& sol, BranchKind kind, bool use_voltage,
                              double factor) {
  TimeScaleSeries out;
  const auto& branches = sol.netlist().branches();
  for (std::size_t b = 0; b < branches.size(); ++b) {
    if (branches[b].kind != kind) continue;
    const auto& f = use_voltage ? sol.branch_voltage(b) : sol.branch_current(b);
    out.add_scaled(TimeScaleSeries::analytic_product(f, f), factor * branches[b].value);
  }
  return out;
}

TimeScaleSeries magnetic_series(const NetworkSolution& sol) {
  return energy_series(sol, BranchKind::inductor, false, 0.25);
}

TimeScaleSeries electric_series(const NetworkSolution& sol) {
  return energy_series(sol, BranchKind::capacitor, true, 0.25);
}

}  // namespace

TimeScaleSeries active_energy_series(const NetworkSolution& sol) {
  auto w = magnetic_series(sol);
  w.add_scaled(electric_series(sol), 1.0);
  return w;
}

TimeScaleSeries reactive_energy_series(const NetworkSolution& sol) {
  auto x = magnetic_series(sol);
  x.add_scaled(electric_series(sol), -1.0);
  return x;
}

InstantaneousSet instantaneous(const NetworkSolution& sol) {
  InstantaneousSet out;
  out.p = multiply(sol.port_voltage(), sol.port_current()).with_unit(Unit::watt);
  out.p_d = LineSpectrum().with_unit(Unit::watt);
  out.w_m = LineSpectrum().with_unit(Unit::joule);
  out.w_e = LineSpectrum().with_unit(Unit::joule);

  const auto& branches = sol.netlist().branches();
  for (std::size_t b = 0; b < branches.size(); ++b) {
    const double value = branches[b].value;
    switch (branches[b].kind) {
      case BranchKind::resistor: {
        const auto& i = sol.branch_current(b);
        out.p_d = out.p_d + value * multiply(i, i).with_unit(Unit::watt);
        break;
      }
      case BranchKind::inductor: {
        const auto& i = sol.branch_current(b);
        out.w_m = out.w_m + (0.5 * value) * multiply(i, i).with_unit(Unit::joule);
        break;
      }
      case BranchKind::capacitor: {
        const auto& u = sol.branch_voltage(b);
        out.w_e = out.w_e + (0.5 * value) * multiply(u, u).with_unit(Unit::joule);
        break;
      }
    }
  }
  out.w = out.w_m + out.w_e;
  out.x = out.w_m - out.w_e;
  return out;
}

BalanceResidual instantaneous_balance(const InstantaneousSet& iset, std::span<const double> t_grid) {
  const LineSpectrum dw = derivative(iset.w);
  ResidualTracker tracker;
  for (double t : t_grid) {
    const double lhs = evaluate(dw, t);
    const double p = evaluate(iset.p, t);
    const double p_d = evaluate(iset.p_d, t);
    tracker.add(std::abs(lhs - (p - p_d)),
                std::max({std::abs(lhs), std::abs(p), std::abs(p_d)}), t, 0.0);
  }
  return tracker.finish();
}

TimeScaleGrid TimeScaleGrid::defaults_for(const LineSpectrum& source) {
  constexpr std::size_t kTimePoints = 256;
  constexpr std::size_t kScalePoints = 32;

  TimeScaleGrid grid;
  const double period = period_of(source);
  for (std::size_t k = 0; k < kTimePoints; ++k) {
    grid.t.push_back(period * static_cast<double>(k) / static_cast<double>(kTimePoints));
  }
  const double w_max = source.max_omega() > 0.0 ? source.max_omega() : 1.0;
  const double w_min = source.min_positive_omega() > 0.0 ? source.min_positive_omega() : 1.0;
  const double lo = 1e-3 / w_max;
  const double hi = 10.0 / w_min;
  grid.s.push_back(0.0);
  for (std::size_t k = 0; k < kScalePoints; ++k) {
    const double frac = static_cast<double>(k) / static_cast<double>(kScalePoints - 1);
    grid.s.push_back(lo * std::pow(hi / lo, frac));
  }
  return grid;
}

TimeScaleGrid TimeScaleGrid::uniform(const LineSpectrum& source, std::size_t nt, std::size_t ns,
                                     double s_max) {
  if (nt == 0 || ns == 0) throw std::invalid_argument("grid dimensions must be positive");
  TimeScaleGrid grid;
  const double period = period_of(source);
  for (std::size_t k = 0; k < nt; ++k) {
    grid.t.push_back(period * static_cast<double>(k) / static_cast<double>(nt));
  }
  for (std::size_t k = 0; k < ns; ++k) {
    grid.s.push_back(ns == 1 ? 0.0 : s_max * static_cast<double>(k) / static_cast<double>(ns - 1));
  }
  return grid;
}

ScaledQuantities scaled(const NetworkSolution& sol, const TimeScaleGrid& grid) {
  if (grid.t.empty() || grid.s.empty()) throw std::invalid_argument("grid must be nonempty");
  for (double s : grid.s) {
    if (!(s >= 0.0)) throw std::invalid_argument("scale values must be >= 0");
  }

  const std::size_t ns = grid.s.size();
  const std::size_t nt = grid.t.size();
  ScaledQuantities out;
  out.grid = grid;
  out.period = period_of(sol.source());
  for (auto* field : {&out.w_m, &out.w_e, &out.w, &out.x, &out.p, &out.q, &out.p_d}) {
    *field = GridField(ns, nt);
  }

  const auto& branches = sol.netlist().branches();
  for (std::size_t is = 0; is < ns; ++is) {
    for (std::size_t it = 0; it < nt; ++it) {
      const ComplexTimePoint tau{grid.t[it], grid.s[is]};
      double w_m = 0.0, w_e = 0.0, p_d = 0.0;
      for (std::size_t b = 0; b < branches.size(); ++b) {
        const double value = branches[b].value;
        switch (branches[b].kind) {
          case BranchKind::resistor:
            p_d += 0.5 * value * std::norm(analytic_at(sol.branch_current(b), tau));
            break;
          case BranchKind::inductor:
            w_m += 0.25 * value * std::norm(analytic_at(sol.branch_current(b), tau));
            break;
          case BranchKind::capacitor:
            w_e += 0.25 * value * std::norm(analytic_at(sol.branch_voltage(b), tau));
            break;
        }
      }
      const Complex s_complex = 0.5 * analytic_at(sol.port_voltage(), tau) *
                                std::conj(analytic_at(sol.port_current(), tau));
      out.w_m.at(is, it) = w_m;
      out.w_e.at(is, it) = w_e;
      out.w.at(is, it) = w_m + w_e;
      out.x.at(is, it) = w_m - w_e;
      out.p_d.at(is, it) = p_d;
      out.p.at(is, it) = s_complex.real();
      out.q.at(is, it) = s_complex.imag();
    }
  }

  out.w_series = active_energy_series(sol);
  out.x_series = reactive_energy_series(sol);
  return out;
}

double active_fd_deviation(const ScaledQuantities& sq, double h) {
  double worst = 0.0;
  for (double s : sq.grid.s) {
    for (double t : sq.grid.t) {
      const double fd =
          (sq.w_series.value(t + h, s).real() - sq.w_series.value(t - h, s).real()) / (2.0 * h);
      worst = std::max(worst, std::abs(fd - sq.w_series.d_dt(t, s).real()));
    }
  }
  return worst;
}

// Fastest rate any term of the series can change at, in t or s.
double rate_omega(const TimeScaleSeries& series) {
  std::int64_t top = 0;
  for (const auto& term : series.terms()) top = std::max(top, term.decay);
  return series.base_omega() * static_cast<double>(top);
}

ActiveBalance active_balance(const ScaledQuantities& sq) {
  ActiveBalance out;
  ResidualTracker tracker;
  // Stored energy turned over at the fastest line rate; keeps the scale
  // physical when the port terms are themselves roundoff.
  const double w_rate = rate_omega(sq.w_series);
  for (std::size_t is = 0; is < sq.grid.s.size(); ++is) {
    for (std::size_t it = 0; it < sq.grid.t.size(); ++it) {
      const double t = sq.grid.t[it];
      const double s = sq.grid.s[is];
      const double lhs = sq.w_series.d_dt(t, s).real();
      const double p = sq.p.at(is, it);
      const double p_d = sq.p_d.at(is, it);
      tracker.add(std::abs(lhs - (p - p_d)),
                  std::max({std::abs(lhs), std::abs(p), std::abs(p_d), w_rate * sq.w.at(is, it)}), t,
                  s);
    }
  }
  out.residual = tracker.finish();
  out.fd_step = 1e-4 * sq.period;
  out.fd_max_deviation = active_fd_deviation(sq, out.fd_step);
  return out;
}

BalanceResidual reactive_balance(const ScaledQuantities& sq) {
  ResidualTracker tracker;
  for (std::size_t is = 0; is < sq.grid.s.size(); ++is) {
    for (std::size_t it = 0; it < sq.grid.t.size(); ++it) {
      const double t = sq.grid.t[it];
      const double s = sq.grid.s[is];
      const double lhs = -sq.x_series.d_ds(t, s).real();
      const double q = sq.q.at(is, it);
      // The reactive balance is the imaginary half of the complex balance, so
      // its scale includes the active terms too.
      tracker.add(std::abs(lhs - q),
                  std::max({std::abs(lhs), std::abs(q), std::abs(sq.p.at(is, it)),
                            std::abs(sq.p_d.at(is, it))}),
                  t, s);
    }
  }
  return tracker.finish();
}

RealImaginaryPower real_imaginary_power(const LineSpectrum& u, const LineSpectrum& i) {
  const LineSpectrum u_h = hilbert(u);
  const LineSpectrum i_h = hilbert(i);
  RealImaginaryPower out;
  out.real = 0.5 * (multiply(u, i) + multiply(u_h, i_h));
  out.imaginary = 0.5 * (multiply(u_h, i) - multiply(u, i_h));
  out.real = out.real.with_unit(Unit::watt);
  out.imaginary = out.imaginary.with_unit(Unit::watt);
  return out;
}

BudeanuResult budeanu(const NetworkSolution& sol) {
  BudeanuResult out;
  out.from_mean_q = mean(real_imaginary_power(sol.port_voltage(), sol.port_current()).imaginary);

  const auto x = reactive_energy_series(sol);
  out.from_scale_derivative = -x.time_mean_d_ds(0.0).real();

  // Largest individual energy-rate term, for an absolute floor when Q_B is
  // itself near zero (resonance, resistive loads).
  double rate_scale = 0.0;
  for (const auto& term : x.terms()) {
    if (term.beat != 0) continue;
    rate_scale += static_cast<double>(term.decay) * x.base_omega() * std::abs(term.coefficient);
  }
  const double a = out.from_mean_q;
  const double b = out.from_scale_derivative;
  const double apparent = rms(sol.port_voltage()) * rms(sol.port_current());
  const double tol = kBudeanuAgreement * std::max(std::abs(a), std::abs(b)) +
                     1e-12 * std::max(rate_scale, apparent);
  if (!(std::abs(a - b) <= tol)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "Budeanu reactive power routes disagree: mean Q(t) = " << a
        << ", -d/ds mean X(t,s) at s=0 = " << b;
    throw ConsistencyError(msg.str());
  }
  out.value = a;
  return out;
}

ClassicalSummary classical_summary(const NetworkSolution& sol) {
  ClassicalSummary out;
  for (const auto& ph : sol.per_line()) {
    LinePower line;
    line.omega = ph.omega;
    if (ph.omega == 0.0) {
      line.u_rms = std::abs(ph.port_voltage);
      line.i_rms = std::abs(ph.port_current);
      line.p = ph.port_voltage.real() * ph.port_current.real();
      line.q = 0.0;
    } else {
      line.u_rms = std::abs(ph.port_voltage) / std::numbers::sqrt2;
      line.i_rms = std::abs(ph.port_current) / std::numbers::sqrt2;
      const Complex s = 0.5 * ph.port_voltage * std::conj(ph.port_current);
      line.p = s.real();
      line.q = s.imag();
    }
    out.p_avg += line.p;
    out.q_budeanu += line.q;
    out.lines.push_back(line);
  }
  out.u_rms = rms(sol.port_voltage());
  out.i_rms = rms(sol.port_current());
  out.s = out.u_rms * out.i_rms;
  return out;
}

StoredEnergyReactive q_from_stored_energy(const NetworkSolution& sol, double omega) {
  const auto& src = sol.source();
  if (src.size() != 1 || src.lines()[0].omega == 0.0) {
    throw std::invalid_argument("Q = 2w(W_m - W_e) needs a single sinusoidal source line");
  }
  if (std::abs(src.lines()[0].omega - omega) > kCommensurateTolerance * omega) {
    throw std::invalid_argument("source frequency does not match the requested omega");
  }

  const auto& ph = sol.per_line()[0];
  const auto& branches = sol.netlist().branches();
  StoredEnergyReactive out;
  for (std::size_t b = 0; b < branches.size(); ++b) {
    if (branches[b].kind == BranchKind::inductor) {
      out.w_m += 0.25 * branches[b].value * std::norm(ph.current[b]);
    } else if (branches[b].kind == BranchKind::capacitor) {
      out.w_e += 0.25 * branches[b].value * std::norm(ph.voltage[b]);
    }
  }
  out.q = 2.0 * omega * (out.w_m - out.w_e);

  const double classical = classical_summary(sol).q_budeanu;
  const double scale = std::max(std::abs(classical), 2.0 * omega * (out.w_m + out.w_e));
  if (std::abs(out.q - classical) > 1e-10 * scale) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "stored-energy Q = " << out.q << " differs from classical Q = " << classical;
    throw ConsistencyError(msg.str());
  }
  return out;
}

BalanceReport balance_report(const NetworkSolution& sol, const InstantaneousSet& iset,
                             const ScaledQuantities& sq) {
  BalanceReport out;
  out.instantaneous = instantaneous_balance(iset, sq.grid.t);
  out.active = active_balance(sq);
  out.reactive = reactive_balance(sq);
  out.budeanu = budeanu(sol);
  out.t_points = sq.grid.t.size();
  out.s_points = sq.grid.s.size();
  const auto [t_lo, t_hi] = std::minmax_element(sq.grid.t.begin(), sq.grid.t.end());
  const auto [s_lo, s_hi] = std::minmax_element(sq.grid.s.begin(), sq.grid.s.end());
  out.t_min = *t_lo;
  out.t_max = *t_hi;
  out.s_min = *s_lo;
  out.s_max = *s_hi;
  return out;
}

}  // namespace tspower
