#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace spectring::testing {

// Kolmogorov distribution tail Q(t) = 2 sum (-1)^{k-1} exp(-2 k^2 t^2).
inline double kolmogorov_q(double t) {
  if (t <= 0.0)
    return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 101; ++k) {
    const double term = std::exp(-2.0 * k * k * t * t);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16)
      break;
  }
  return std::min(1.0, std::max(0.0, 2.0 * sum));
}

// One-sample KS test against a CDF, asymptotic p-value with the Stephens
// small-sample correction.
inline double ks_test(std::vector<double> sample,
                      const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
  }
  const double rn = std::sqrt(n);
  return kolmogorov_q(d * (rn + 0.12 + 0.11 / rn));
}

// Two-sample KS test.
inline double ks_test_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x)
      ++i;
    while (j < b.size() && b[j] <= x)
      ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na -
                              static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  return kolmogorov_q(d * (ne + 0.12 + 0.11 / ne));
}

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

inline MeanStderr mean_stderr(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs)
    mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : xs)
    var += (x - mean) * (x - mean);
  var /= (n - 1.0);
  return MeanStderr{mean, std::sqrt(var / n)};
}

} // namespace spectring::testing
