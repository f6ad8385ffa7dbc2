#pragma once

// Multi-tone real signals held exactly as finite line spectra.
//
// A LineSpectrum represents
//
//     f(t) = A_0 + sum_{k} Re{ A_k exp(j w_k t) },   w_k > 0
//
// with complex peak amplitudes A_k and a real DC term A_0. Every frequency is
// an integer multiple of a base frequency w_0, so products, derivatives and
// time means stay exact.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tspower {

using Complex = std::complex<double>;

enum class Unit { none, volt, ampere, watt, joule };

const char* to_string(Unit unit) noexcept;

struct SpectralLine {
  double omega = 0.0;   // rad/s
  Complex amplitude{};  // peak value
};

/// tau = t + j s with s >= 0 the resolution scale.
struct ComplexTimePoint {
  double t = 0.0;
  double s = 0.0;
};

struct SampledSignal {
  double t0 = 0.0;
  double dt = 1.0;
  std::vector<double> samples;

  double time_at(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
  std::size_t size() const { return samples.size(); }
};

/// Relative tolerance used to snap frequencies onto a common harmonic grid.
inline constexpr double kCommensurateTolerance = 1e-9;

/// Lines with |A| below this fraction of the largest amplitude are dropped
/// from products.
inline constexpr double kPruneRatio = 1e-14;

/// Largest common base frequency of `omegas` (zeros ignored). Returns 0 when
/// no positive frequency is present. Throws IncommensurateError.
double common_base_omega(std::span<const double> omegas);

class LineSpectrum {
 public:
  LineSpectrum() = default;

  /// Lines may come in any order; lines that land on the same harmonic are
  /// summed. Throws std::invalid_argument for a negative or non-finite
  /// frequency, a DC line with a nonzero imaginary part, or non-finite
  /// amplitudes, and IncommensurateError when no common base exists.
  explicit LineSpectrum(std::vector<SpectralLine> lines, Unit unit = Unit::none);

  static LineSpectrum constant(double value, Unit unit = Unit::none);

  /// amplitude * cos(omega t + phase). omega must be >= 0.
  static LineSpectrum cosine(double omega, double amplitude, double phase = 0.0,
                             Unit unit = Unit::none);

  std::span<const SpectralLine> lines() const { return lines_; }
  std::size_t size() const { return lines_.size(); }
  bool empty() const { return lines_.empty(); }
  Unit unit() const { return unit_; }

  /// Common base frequency w_0; 0 when the signal has no AC line.
  double base_omega() const { return base_omega_; }

  /// Integer multiple of base_omega() for line `i`.
  std::int64_t harmonic(std::size_t i) const { return harmonics_[i]; }

  /// 2 pi / w_0; 0 for a constant or empty signal.
  double common_period() const;

  double dc() const;
  Complex amplitude_at_harmonic(std::int64_t n) const;

  double max_omega() const;
  /// Smallest positive line frequency; 0 when none.
  double min_positive_omega() const;

  LineSpectrum with_unit(Unit unit) const;

  friend LineSpectrum operator+(const LineSpectrum& a, const LineSpectrum& b);
  friend LineSpectrum operator-(const LineSpectrum& a, const LineSpectrum& b);
  friend LineSpectrum operator*(double k, const LineSpectrum& f);
  LineSpectrum operator-() const { return -1.0 * *this; }

  /// Builds directly from harmonic indices (n >= 0) on base `base_omega`.
  /// Zero amplitudes are dropped; the DC amplitude is forced real.
  static LineSpectrum from_harmonics(double base_omega,
                                     const std::vector<std::pair<std::int64_t, Complex>>& terms,
                                     Unit unit);

 private:
  std::vector<SpectralLine> lines_;
  std::vector<std::int64_t> harmonics_;
  double base_omega_ = 0.0;
  Unit unit_ = Unit::none;
};

double evaluate(const LineSpectrum& f, double t);

/// Quadrature shift: A_k -> -j A_k for every AC line, DC dropped.
LineSpectrum hilbert(const LineSpectrum& f);

/// Analytic-phasor transform at complex time t + j s:
/// A_0 + sum_k A_k exp(j w_k t) exp(-w_k s). Requires s >= 0.
Complex analytic_at(const LineSpectrum& f, ComplexTimePoint p);

/// Exact product. Throws IncommensurateError. The result unit is watt for a
/// volt/ampere pair and none otherwise.
LineSpectrum multiply(const LineSpectrum& f, const LineSpectrum& g);

/// d/dt, line by line.
LineSpectrum derivative(const LineSpectrum& f);

/// Time mean over the common period (the DC amplitude).
double mean(const LineSpectrum& f);

/// sqrt(A_0^2 + sum |A_k|^2 / 2).
double rms(const LineSpectrum& f);

/// samples[k] = evaluate(f, t0 + k dt). Requires n >= 1 and dt > 0.
SampledSignal sample(const LineSpectrum& f, double t0, double dt, std::size_t n);

}  // namespace tspower
