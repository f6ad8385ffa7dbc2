#pragma once

// Brute-force validators that share no code path with the line-spectrum
// engine: transient integration of the netlist, FFT Hilbert transform,
// quadrature of the analytic-phasor integral, and sampled time means.

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "tspower/network.hpp"
#include "tspower/spectrum.hpp"

namespace tspower::oracle {

struct OdeState {
  std::vector<double> inductor_currents;   // A, branch order
  std::vector<double> capacitor_voltages;  // V, branch order
  double time = 0.0;
};

struct OdeOptions {
  std::size_t steps_per_period = 4096;
  /// Backward-Euler substeps covering the first step, so the trapezoidal
  /// rule starts from consistent capacitor currents.
  std::size_t startup_substeps = 1000;
  /// When > 0, integration continues past the requested period count until
  /// two consecutive periods of port current differ by less than this
  /// fraction of its peak, or max_periods is reached.
  double settle_tolerance = 0.0;
  std::size_t max_periods = 4000;
};

struct OdeResult {
  SampledSignal port_current;  // final period, steps_per_period samples
  OdeState final_state;
  std::size_t periods_run = 0;
  bool settled = true;         // false if settle_tolerance was not met
  std::string warning;         // set for networks without resistors
};

/// Trapezoidal integration from rest over `periods` common periods of the
/// source. Requires periods >= 10 and a source with a common period.
OdeResult ode_steady_state(const Netlist& net, const LineSpectrum& source, std::size_t periods,
                           const OdeOptions& options = {});

/// Imaginary part of the discrete analytic signal. Sample count must be a
/// power of two; DC and Nyquist bins keep unit weight.
SampledSignal fft_hilbert(const SampledSignal& x);

enum class QuadratureRule { simpson };

struct QuadratureConfig {
  double half_width = 400.0;  // s
  std::size_t panels = 1u << 17;
  QuadratureRule rule = QuadratureRule::simpson;
};

struct QuadratureResult {
  Complex value{};
  double truncation_estimate = 0.0;
};

/// (j/pi) * integral of f(t') / (t + js - t') over [t - W, t + W] by composite
/// Simpson. Requires s > 0 and an even panel count >= 2.
QuadratureResult quadrature_analytic(const LineSpectrum& f, ComplexTimePoint p,
                                     const QuadratureConfig& cfg = {});

/// Periodic trapezoidal average over [t0, t0 + n dt).
double numeric_mean(const SampledSignal& x);

}  // namespace tspower::oracle
