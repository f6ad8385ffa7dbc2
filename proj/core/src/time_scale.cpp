#include "tspower/time_scale.hpp"

#include <cmath>
#include <map>
#include <utility>

namespace tspower {

namespace {

std::int64_t rescale(std::int64_t n, double from, double to) {
  return n == 0 ? 0 : static_cast<std::int64_t>(std::llround(static_cast<double>(n) * from / to));
}

}  // namespace

TimeScaleSeries TimeScaleSeries::analytic_product(const LineSpectrum& f, const LineSpectrum& g) {
  TimeScaleSeries out;
  const double bases[] = {f.base_omega(), g.base_omega()};
  out.base_omega_ = common_base_omega(bases);
  for (std::size_t a = 0; a < f.size(); ++a) {
    const auto na = rescale(f.harmonic(a), f.base_omega(), out.base_omega_);
    for (std::size_t b = 0; b < g.size(); ++b) {
      const auto nb = rescale(g.harmonic(b), g.base_omega(), out.base_omega_);
      out.terms_.push_back(
          {na - nb, na + nb, f.lines()[a].amplitude * std::conj(g.lines()[b].amplitude)});
    }
  }
  out.normalize();
  return out;
}

TimeScaleSeries& TimeScaleSeries::add_scaled(const TimeScaleSeries& other, double k) {
  const double bases[] = {base_omega_, other.base_omega_};
  const double base = common_base_omega(bases);
  for (auto& term : terms_) {
    term.beat = rescale(term.beat, base_omega_, base);
    term.decay = rescale(term.decay, base_omega_, base);
  }
  for (const auto& term : other.terms_) {
    terms_.push_back({rescale(term.beat, other.base_omega_, base),
                      rescale(term.decay, other.base_omega_, base), k * term.coefficient});
  }
  base_omega_ = base;
  normalize();
  return *this;
}

void TimeScaleSeries::normalize() {
  std::map<std::pair<std::int64_t, std::int64_t>, Complex> merged;
  for (const auto& term : terms_) merged[{term.beat, term.decay}] += term.coefficient;
  terms_.clear();
  for (const auto& [key, c] : merged) {
    if (c != Complex{}) terms_.push_back({key.first, key.second, c});
  }
}

Complex TimeScaleSeries::value(double t, double s) const {
  Complex sum{};
  for (const auto& term : terms_) {
    const double w_beat = static_cast<double>(term.beat) * base_omega_;
    const double w_decay = static_cast<double>(term.decay) * base_omega_;
    sum += term.coefficient * std::polar(std::exp(-w_decay * s), w_beat * t);
  }
  return sum;
}

Complex TimeScaleSeries::d_dt(double t, double s) const {
  Complex sum{};
  for (const auto& term : terms_) {
    const double w_beat = static_cast<double>(term.beat) * base_omega_;
    const double w_decay = static_cast<double>(term.decay) * base_omega_;
    sum += Complex(0.0, w_beat) * term.coefficient * std::polar(std::exp(-w_decay * s), w_beat * t);
  }
  return sum;
}

Complex TimeScaleSeries::d_ds(double t, double s) const {
  Complex sum{};
  for (const auto& term : terms_) {
    const double w_beat = static_cast<double>(term.beat) * base_omega_;
    const double w_decay = static_cast<double>(term.decay) * base_omega_;
    sum += -w_decay * term.coefficient * std::polar(std::exp(-w_decay * s), w_beat * t);
  }
  return sum;
}

Complex TimeScaleSeries::time_mean(double s) const {
  Complex sum{};
  for (const auto& term : terms_) {
    if (term.beat != 0) continue;
    sum += term.coefficient * std::exp(-static_cast<double>(term.decay) * base_omega_ * s);
  }
  return sum;
}

Complex TimeScaleSeries::time_mean_d_ds(double s) const {
  Complex sum{};
  for (const auto& term : terms_) {
    if (term.beat != 0) continue;
    const double w_decay = static_cast<double>(term.decay) * base_omega_;
    sum += -w_decay * term.coefficient * std::exp(-w_decay * s);
  }
  return sum;
}

}  // namespace tspower
