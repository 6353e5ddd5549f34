#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace superpose {

/// Neumaier-compensated accumulator. Cross moments under power laws and the
/// pmf moment sums span many orders of magnitude, so plain summation loses
/// digits that the acceptance tolerances care about.
class CompensatedSum {
 public:
  CompensatedSum& operator+=(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

inline double compensated_total(std::span<const double> xs) {
  CompensatedSum acc;
  for (double x : xs) acc += x;
  return acc.value();
}

/// (x)_r = x (x-1) ... (x-r+1); zero when x < r.
inline double falling_factorial(std::uint64_t x, unsigned r) {
  if (x < r) return 0.0;
  double out = 1.0;
  for (unsigned i = 0; i < r; ++i) out *= static_cast<double>(x - i);
  return out;
}

/// Full Bin(trials, p) pmf on {0, ..., trials}.
std::vector<double> binomial_pmf(std::uint64_t trials, double p);

double poisson_pmf(double lambda, std::uint64_t k);

}  // namespace superpose
