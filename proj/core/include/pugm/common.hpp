#ifndef PUGM_COMMON_HPP
#define PUGM_COMMON_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pugm {

// Bad user input (unknown vertex, malformed file, overlapping sets, ...).
// The CLI maps this to exit code 1.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical or generation failure (non-PD matrix, non-finite density, ...).
// The CLI maps this to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Request exceeds an enumeration cap (2^p subsets, 2^q spike-slab terms).
class CapacityError : public InputError {
 public:
  explicit CapacityError(const std::string& what) : InputError(what) {}
};

inline double log_sum_exp(std::span<const double> logs) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : logs) m = std::max(m, v);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double v : logs) s += std::exp(v - m);
  return m + std::log(s);
}

inline double log_sum_exp(double a, double b) {
  const double m = std::max(a, b);
  if (!std::isfinite(m)) return m;
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

inline double log_sum_exp(std::initializer_list<double> logs) {
  return log_sum_exp(std::span<const double>(logs.begin(), logs.size()));
}

// 1 / (1 + exp(-d)), stable for large |d|.
inline double logistic(double d) {
  if (d >= 0.0) return 1.0 / (1.0 + std::exp(-d));
  const double e = std::exp(d);
  return e / (1.0 + e);
}

}  // namespace pugm

#endif
