#include "tspower/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "tspower/errors.hpp"

namespace tspower {

namespace {

// Larger bounds would let the 1e-9 tolerance accept almost any ratio.
constexpr std::int64_t kMaxDenominator = 1000;

bool near_integer(double x) {
  return std::abs(x - std::round(x)) <= kCommensurateTolerance * std::max(1.0, std::abs(x));
}

Unit product_unit(Unit a, Unit b) {
  if ((a == Unit::volt && b == Unit::ampere) || (a == Unit::ampere && b == Unit::volt)) {
    return Unit::watt;
  }
  if (a == Unit::none) return b;
  if (b == Unit::none) return a;
  return Unit::none;
}

Unit sum_unit(Unit a, Unit b) {
  if (a == b) return a;
  if (a == Unit::none) return b;
  if (b == Unit::none) return a;
  return Unit::none;
}

// Re-expresses the harmonic indices of `f` on the (finer) base `base`.
std::map<std::int64_t, Complex> harmonics_on(const LineSpectrum& f, double base) {
  std::map<std::int64_t, Complex> out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double omega = f.lines()[i].omega;
    const auto n = omega == 0.0 ? std::int64_t{0}
                                : static_cast<std::int64_t>(std::llround(omega / base));
    out[n] += f.lines()[i].amplitude;
  }
  return out;
}

double joint_base(const LineSpectrum& a, const LineSpectrum& b) {
  const double bases[] = {a.base_omega(), b.base_omega()};
  return common_base_omega(bases);
}

LineSpectrum combine(const LineSpectrum& a, const LineSpectrum& b, double sign) {
  const double base = joint_base(a, b);
  auto terms = harmonics_on(a, base);
  for (const auto& [n, amp] : harmonics_on(b, base)) terms[n] += sign * amp;
  std::vector<std::pair<std::int64_t, Complex>> flat(terms.begin(), terms.end());
  return LineSpectrum::from_harmonics(base, flat, sum_unit(a.unit(), b.unit()));
}

}  // namespace

const char* to_string(Unit unit) noexcept {
  switch (unit) {
    case Unit::volt: return "V";
    case Unit::ampere: return "A";
    case Unit::watt: return "W";
    case Unit::joule: return "J";
    case Unit::none: break;
  }
  return "";
}

double common_base_omega(std::span<const double> omegas) {
  double smallest = 0.0;
  for (double w : omegas) {
    if (w > 0.0 && (smallest == 0.0 || w < smallest)) smallest = w;
  }
  if (smallest == 0.0) return 0.0;

  for (std::int64_t q = 1; q <= kMaxDenominator; ++q) {
    bool ok = true;
    for (double w : omegas) {
      if (w == 0.0) continue;
      if (!near_integer(static_cast<double>(q) * w / smallest)) {
        ok = false;
        break;
      }
    }
    if (ok) return smallest / static_cast<double>(q);
  }
  throw IncommensurateError("frequencies share no common base within relative tolerance 1e-9");
}

LineSpectrum::LineSpectrum(std::vector<SpectralLine> lines, Unit unit) : unit_(unit) {
  std::vector<double> omegas;
  omegas.reserve(lines.size());
  for (const auto& line : lines) {
    if (!std::isfinite(line.omega) || line.omega < 0.0) {
      throw std::invalid_argument("spectral line frequency must be finite and >= 0, got " +
                                  std::to_string(line.omega));
    }
    if (!std::isfinite(line.amplitude.real()) || !std::isfinite(line.amplitude.imag())) {
      throw std::invalid_argument("spectral line amplitude must be finite");
    }
    if (line.omega == 0.0 && line.amplitude.imag() != 0.0) {
      throw std::invalid_argument("DC line amplitude must be real");
    }
    omegas.push_back(line.omega);
  }
  const double base = common_base_omega(omegas);

  std::map<std::int64_t, Complex> terms;
  for (const auto& line : lines) {
    const auto n = line.omega == 0.0 ? std::int64_t{0}
                                     : static_cast<std::int64_t>(std::llround(line.omega / base));
    terms[n] += line.amplitude;
  }
  std::vector<std::pair<std::int64_t, Complex>> flat(terms.begin(), terms.end());
  *this = from_harmonics(base, flat, unit);
}

LineSpectrum LineSpectrum::from_harmonics(
    double base_omega, const std::vector<std::pair<std::int64_t, Complex>>& terms, Unit unit) {
  std::map<std::int64_t, Complex> sorted;
  for (const auto& [n, amp] : terms) {
    if (n < 0) throw std::invalid_argument("negative harmonic index");
    sorted[n] += amp;
  }

  LineSpectrum out;
  out.unit_ = unit;
  std::int64_t gcd = 0;
  for (const auto& [n, amp] : sorted) {
    Complex a = n == 0 ? Complex(amp.real(), 0.0) : amp;
    if (a == Complex{}) continue;
    out.harmonics_.push_back(n);
    out.lines_.push_back({static_cast<double>(n) * base_omega, a});
    gcd = std::gcd(gcd, n);
  }
  // Keep the base as the largest common divisor of the surviving lines so
  // that equal signals compare equal regardless of how they were built.
  if (gcd == 0) {
    out.base_omega_ = 0.0;
  } else {
    out.base_omega_ = base_omega * static_cast<double>(gcd);
    for (auto& n : out.harmonics_) n /= gcd;
  }
  return out;
}

LineSpectrum LineSpectrum::constant(double value, Unit unit) {
  if (value == 0.0) {
    LineSpectrum z;
    z.unit_ = unit;
    return z;
  }
  return LineSpectrum({{0.0, Complex(value, 0.0)}}, unit);
}

LineSpectrum LineSpectrum::cosine(double omega, double amplitude, double phase, Unit unit) {
  if (omega == 0.0) return constant(amplitude * std::cos(phase), unit);
  return LineSpectrum({{omega, std::polar(amplitude, phase)}}, unit);
}

double LineSpectrum::common_period() const {
  return base_omega_ > 0.0 ? 2.0 * std::numbers::pi / base_omega_ : 0.0;
}

double LineSpectrum::dc() const {
  return !harmonics_.empty() && harmonics_.front() == 0 ? lines_.front().amplitude.real() : 0.0;
}

Complex LineSpectrum::amplitude_at_harmonic(std::int64_t n) const {
  const auto it = std::lower_bound(harmonics_.begin(), harmonics_.end(), n);
  if (it == harmonics_.end() || *it != n) return {};
  return lines_[static_cast<std::size_t>(it - harmonics_.begin())].amplitude;
}

double LineSpectrum::max_omega() const { return lines_.empty() ? 0.0 : lines_.back().omega; }

double LineSpectrum::min_positive_omega() const {
  for (const auto& line : lines_) {
    if (line.omega > 0.0) return line.omega;
  }
  return 0.0;
}

LineSpectrum LineSpectrum::with_unit(Unit unit) const {
  LineSpectrum out = *this;
  out.unit_ = unit;
  return out;
}

LineSpectrum operator+(const LineSpectrum& a, const LineSpectrum& b) { return combine(a, b, 1.0); }

LineSpectrum operator-(const LineSpectrum& a, const LineSpectrum& b) { return combine(a, b, -1.0); }

LineSpectrum operator*(double k, const LineSpectrum& f) {
  std::vector<std::pair<std::int64_t, Complex>> terms;
  terms.reserve(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) terms.emplace_back(f.harmonic(i), k * f.lines()[i].amplitude);
  return LineSpectrum::from_harmonics(f.base_omega(), terms, f.unit());
}

double evaluate(const LineSpectrum& f, double t) {
  double sum = 0.0;
  for (const auto& line : f.lines()) {
    if (line.omega == 0.0) {
      sum += line.amplitude.real();
    } else {
      const double phase = line.omega * t;
      sum += line.amplitude.real() * std::cos(phase) - line.amplitude.imag() * std::sin(phase);
    }
  }
  return sum;
}

LineSpectrum hilbert(const LineSpectrum& f) {
  std::vector<std::pair<std::int64_t, Complex>> terms;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.harmonic(i) == 0) continue;
    terms.emplace_back(f.harmonic(i), Complex(0.0, -1.0) * f.lines()[i].amplitude);
  }
  return LineSpectrum::from_harmonics(f.base_omega(), terms, f.unit());
}

Complex analytic_at(const LineSpectrum& f, ComplexTimePoint p) {
  if (!(p.s >= 0.0)) throw std::invalid_argument("analytic_at requires s >= 0");
  Complex sum{};
  for (const auto& line : f.lines()) {
    if (line.omega == 0.0) {
      sum += line.amplitude;
    } else {
      sum += line.amplitude * std::polar(std::exp(-line.omega * p.s), line.omega * p.t);
    }
  }
  return sum;
}

LineSpectrum multiply(const LineSpectrum& f, const LineSpectrum& g) {
  const Unit unit = product_unit(f.unit(), g.unit());
  if (f.empty() || g.empty()) return LineSpectrum().with_unit(unit);
  const double base = joint_base(f, g);

  // Two-sided coefficients: c_0 = A_0, c_{+n} = A_n / 2, c_{-n} = conj(A_n) / 2.
  auto two_sided = [base](const LineSpectrum& x) {
    std::vector<std::pair<std::int64_t, Complex>> c;
    for (const auto& [n, amp] : harmonics_on(x, base)) {
      if (n == 0) {
        c.emplace_back(0, amp);
      } else {
        c.emplace_back(n, 0.5 * amp);
        c.emplace_back(-n, 0.5 * std::conj(amp));
      }
    }
    return c;
  };
  const auto cf = two_sided(f);
  const auto cg = two_sided(g);

  std::map<std::int64_t, Complex> product;
  for (const auto& [na, a] : cf) {
    for (const auto& [nb, b] : cg) {
      const std::int64_t m = na + nb;
      if (m >= 0) product[m] += a * b;
    }
  }

  double largest = 0.0;
  std::vector<std::pair<std::int64_t, Complex>> terms;
  for (const auto& [m, d] : product) {
    const Complex amp = m == 0 ? Complex(d.real(), 0.0) : 2.0 * d;
    largest = std::max(largest, std::abs(amp));
    terms.emplace_back(m, amp);
  }
  std::erase_if(terms, [&](const auto& t) { return std::abs(t.second) < kPruneRatio * largest; });
  return LineSpectrum::from_harmonics(base, terms, unit);
}

LineSpectrum derivative(const LineSpectrum& f) {
  std::vector<std::pair<std::int64_t, Complex>> terms;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.harmonic(i) == 0) continue;
    terms.emplace_back(f.harmonic(i), Complex(0.0, f.lines()[i].omega) * f.lines()[i].amplitude);
  }
  return LineSpectrum::from_harmonics(f.base_omega(), terms,
                                     f.unit() == Unit::joule ? Unit::watt : Unit::none);
}

double mean(const LineSpectrum& f) { return f.dc(); }

double rms(const LineSpectrum& f) {
  double sum = 0.0;
  for (const auto& line : f.lines()) {
    sum += line.omega == 0.0 ? std::norm(line.amplitude) : 0.5 * std::norm(line.amplitude);
  }
  return std::sqrt(sum);
}

SampledSignal sample(const LineSpectrum& f, double t0, double dt, std::size_t n) {
  if (n < 1) throw std::invalid_argument("sample requires n >= 1");
  if (!(dt > 0.0)) throw std::invalid_argument("sample requires dt > 0");
  SampledSignal out{t0, dt, std::vector<double>(n)};
  for (std::size_t k = 0; k < n; ++k) out.samples[k] = evaluate(f, out.time_at(k));
  return out;
}

}  // namespace tspower
