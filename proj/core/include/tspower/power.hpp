#pragma once

// Instantaneous, classical and time-scale power quantities of a solved
// network, and the balance checks that tie them together.
//
// The reactive balance lives in the scale variable s only: there is no
// t-balance for reactive energy, so none is offered here.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tspower/network.hpp"
#include "tspower/spectrum.hpp"
#include "tspower/time_scale.hpp"

namespace tspower {

struct InstantaneousSet {
  LineSpectrum p;    // port power u i
  LineSpectrum p_d;  // sum R i_b^2
  LineSpectrum w_m;  // sum L i_b^2 / 2
  LineSpectrum w_e;  // sum C u_b^2 / 2
  LineSpectrum w;    // w_m + w_e
  LineSpectrum x;    // w_m - w_e
};

InstantaneousSet instantaneous(const NetworkSolution& sol);

/// Worst point of a balance check. `scale` is the largest magnitude of any
/// term entering the balance over the grid; `relative` = max_abs / scale.
struct BalanceResidual {
  double max_abs = 0.0;
  double scale = 0.0;
  double relative = 0.0;
  double worst_t = 0.0;
  double worst_s = 0.0;
};

/// max_t |dw/dt - (p - p_d)| with dw/dt taken line by line.
BalanceResidual instantaneous_balance(const InstantaneousSet& iset, std::span<const double> t_grid);

struct TimeScaleGrid {
  std::vector<double> t;
  std::vector<double> s;

  /// 256 points over one common period, and s = 0 followed by 32 geometric
  /// points over [1e-3 / w_max, 10 / w_min]. A constant or empty source uses
  /// a 2 pi period and w = 1.
  static TimeScaleGrid defaults_for(const LineSpectrum& source);

  /// `nt` points over one period and `ns` points s in [0, s_max] uniformly.
  static TimeScaleGrid uniform(const LineSpectrum& source, std::size_t nt, std::size_t ns,
                               double s_max);
};

/// Row-major values over the grid: index [i_s * t.size() + i_t].
struct GridField {
  std::size_t ns = 0;
  std::size_t nt = 0;
  std::vector<double> values;

  GridField() = default;
  GridField(std::size_t ns_, std::size_t nt_) : ns(ns_), nt(nt_), values(ns_ * nt_) {}
  double& at(std::size_t is, std::size_t it) { return values[is * nt + it]; }
  double at(std::size_t is, std::size_t it) const { return values[is * nt + it]; }
};

/// Time-scale quantities of a solution. Grid values come from pointwise
/// evaluation of the analytic phasors; the series forms give exact
/// derivatives.
struct ScaledQuantities {
  TimeScaleGrid grid;
  GridField w_m, w_e, w, x;  // J
  GridField p, q, p_d;       // W, VAr, W

  TimeScaleSeries w_series;  // W(t, s)
  TimeScaleSeries x_series;  // X(t, s)
  double period = 0.0;       // common period used for finite differences
};

/// Series forms of W(t, s) = W_m + W_e and X(t, s) = W_m - W_e.
TimeScaleSeries active_energy_series(const NetworkSolution& sol);
TimeScaleSeries reactive_energy_series(const NetworkSolution& sol);

ScaledQuantities scaled(const NetworkSolution& sol, const TimeScaleGrid& grid);

/// Active-time balance dW/dt = P - P_d, plus a central-difference
/// cross-check of dW/dt.
struct ActiveBalance {
  BalanceResidual residual;
  double fd_step = 0.0;
  double fd_max_deviation = 0.0;  // max |dW/dt (FD) - dW/dt (exact)|
};

ActiveBalance active_balance(const ScaledQuantities& sq);

/// Finite-difference deviation for an explicit step, for convergence studies.
double active_fd_deviation(const ScaledQuantities& sq, double h);

/// Reactive-time balance -dX/ds = Q. The relative residual is taken against
/// the largest of |dX/ds|, |Q|, |P| and |P_d|.
BalanceResidual reactive_balance(const ScaledQuantities& sq);

struct RealImaginaryPower {
  LineSpectrum real;       // P(t) = (u i + u_h i_h) / 2
  LineSpectrum imaginary;  // Q(t) = (u_h i - u i_h) / 2
};

RealImaginaryPower real_imaginary_power(const LineSpectrum& u, const LineSpectrum& i);

/// Relative agreement required between the two Budeanu routes.
inline constexpr double kBudeanuAgreement = 1e-8;

struct BudeanuResult {
  double from_mean_q = 0.0;          // mean of Q(t)
  double from_scale_derivative = 0.0;  // -d/ds of mean X(t, s) at s = 0
  double value = 0.0;
};

/// Throws ConsistencyError when the two routes disagree beyond
/// kBudeanuAgreement (relative, with an absolute floor of 1e-12 times the
/// larger of S and the summed energy-rate terms).
BudeanuResult budeanu(const NetworkSolution& sol);

struct LinePower {
  double omega = 0.0;
  double u_rms = 0.0;
  double i_rms = 0.0;
  double p = 0.0;  // W
  double q = 0.0;  // VAr
};

struct ClassicalSummary {
  std::vector<LinePower> lines;
  double p_avg = 0.0;    // sum P_k
  double q_budeanu = 0.0;  // sum Q_k
  double s = 0.0;        // U I
  double u_rms = 0.0;
  double i_rms = 0.0;
};

/// Per line P_k + j Q_k = U_k conj(I_k) / 2 with peak phasors; the DC line
/// contributes U_0 I_0.
ClassicalSummary classical_summary(const NetworkSolution& sol);

struct StoredEnergyReactive {
  double w_m = 0.0;  // mean magnetic energy, J
  double w_e = 0.0;  // mean electric energy, J
  double q = 0.0;    // 2 w (W_m - W_e), VAr
};

/// Sinusoidal-only: Q = 2 omega (W_m - W_e). Throws std::invalid_argument
/// unless the source is a single line at `omega`, and ConsistencyError when
/// the result departs from the classical Q by more than 1e-10 relative.
StoredEnergyReactive q_from_stored_energy(const NetworkSolution& sol, double omega);

struct BalanceReport {
  BalanceResidual instantaneous;
  ActiveBalance active;
  BalanceResidual reactive;
  BudeanuResult budeanu;
  std::size_t t_points = 0;
  std::size_t s_points = 0;
  double t_min = 0.0, t_max = 0.0, s_min = 0.0, s_max = 0.0;
};

BalanceReport balance_report(const NetworkSolution& sol, const InstantaneousSet& iset,
                             const ScaledQuantities& sq);

}  // namespace tspower
