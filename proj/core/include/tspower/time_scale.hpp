#pragma once

// Bilinear products of analytic signals in the time-scale domain.
//
// For analytic signals f^(tau) = sum_a F_a exp(j w_a tau) the product
// f^(tau) conj(g^(tau)) expands into beat terms
//
//     c_ab exp(j (w_a - w_b) t) exp(-(w_a + w_b) s),
//
// whose t- and s-derivatives are exact: multiply by j(w_a - w_b) and
// -(w_a + w_b) respectively.

#include <cstdint>
#include <vector>

#include "tspower/spectrum.hpp"

namespace tspower {

class TimeScaleSeries {
 public:
  struct Term {
    std::int64_t beat = 0;  // (n_a - n_b), multiples of base_omega
    std::int64_t decay = 0; // (n_a + n_b) >= 0
    Complex coefficient{};
  };

  TimeScaleSeries() = default;

  /// f^(t + js) * conj(g^(t + js)) with the DC line of each counted at full
  /// weight.
  static TimeScaleSeries analytic_product(const LineSpectrum& f, const LineSpectrum& g);

  /// *this += k * other. Rebases onto a common base frequency when needed.
  TimeScaleSeries& add_scaled(const TimeScaleSeries& other, double k);

  Complex value(double t, double s) const;
  Complex d_dt(double t, double s) const;
  Complex d_ds(double t, double s) const;

  /// Mean over t (only beat = 0 terms survive) and its s-derivative.
  Complex time_mean(double s) const;
  Complex time_mean_d_ds(double s) const;

  double base_omega() const { return base_omega_; }
  const std::vector<Term>& terms() const { return terms_; }

 private:
  void normalize();

  std::vector<Term> terms_;
  double base_omega_ = 0.0;
};

}  // namespace tspower
