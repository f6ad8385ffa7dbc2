#pragma once

// Small dense LU with partial pivoting, used by the MNA solver and the
// transient oracle. Matrices are row-major and square.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

namespace tspower::detail {

template <typename T>
class DenseLu {
 public:
  /// Returns nullopt when a pivot falls below `pivot_ratio` times the largest
  /// entry of `a`.
  static std::optional<DenseLu> factor(std::vector<T> a, std::size_t n, double pivot_ratio) {
    double largest = 0.0;
    for (const auto& x : a) largest = std::max(largest, static_cast<double>(std::abs(x)));
    if (largest == 0.0) return std::nullopt;

    DenseLu lu;
    lu.n_ = n;
    lu.perm_.resize(n);
    for (std::size_t i = 0; i < n; ++i) lu.perm_[i] = i;

    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      double best = std::abs(a[k * n + k]);
      for (std::size_t i = k + 1; i < n; ++i) {
        const double m = std::abs(a[i * n + k]);
        if (m > best) {
          best = m;
          p = i;
        }
      }
      if (best < pivot_ratio * largest) return std::nullopt;
      if (p != k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[p * n + j]);
        std::swap(lu.perm_[k], lu.perm_[p]);
      }
      const T pivot = a[k * n + k];
      for (std::size_t i = k + 1; i < n; ++i) {
        const T factor = a[i * n + k] / pivot;
        a[i * n + k] = factor;
        if (factor == T{}) continue;
        for (std::size_t j = k + 1; j < n; ++j) a[i * n + j] -= factor * a[k * n + j];
      }
    }
    lu.lu_ = std::move(a);
    return lu;
  }

  std::vector<T> solve(const std::vector<T>& b) const {
    std::vector<T> x(n_);
    for (std::size_t i = 0; i < n_; ++i) x[i] = b[perm_[i]];
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < i; ++j) x[i] -= lu_[i * n_ + j] * x[j];
    }
    for (std::size_t i = n_; i-- > 0;) {
      for (std::size_t j = i + 1; j < n_; ++j) x[i] -= lu_[i * n_ + j] * x[j];
      x[i] /= lu_[i * n_ + i];
    }
    return x;
  }

 private:
  std::size_t n_ = 0;
  std::vector<T> lu_;
  std::vector<std::size_t> perm_;
};

/// x <- x + A^{-1}(b - A x), once.
template <typename T>
void refine(const DenseLu<T>& lu, const std::vector<T>& a, std::size_t n, const std::vector<T>& b,
            std::vector<T>& x) {
  std::vector<T> r(b);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) r[i] -= a[i * n + j] * x[j];
  }
  const auto dx = lu.solve(r);
  for (std::size_t i = 0; i < n; ++i) x[i] += dx[i];
}

}  // namespace tspower::detail
