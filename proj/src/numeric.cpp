#include "superpose/numeric.hpp"

namespace superpose {

std::vector<double> binomial_pmf(std::uint64_t trials, double p) {
  std::vector<double> out(trials + 1, 0.0);
  if (p <= 0.0) {
    out.front() = 1.0;
    return out;
  }
  if (p >= 1.0) {
    out.back() = 1.0;
    return out;
  }
  // Direct products are exact enough for small tables and keep textbook values
  // like Bin(2, 1/2) bit-exact; larger tables go through log space.
  if (trials <= 30) {
    double choose = 1.0;
    for (std::uint64_t k = 0; k <= trials; ++k) {
      out[k] = choose * std::pow(p, static_cast<double>(k)) *
               std::pow(1.0 - p, static_cast<double>(trials - k));
      choose = choose * static_cast<double>(trials - k) / static_cast<double>(k + 1);
    }
    return out;
  }
  const double n = static_cast<double>(trials);
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  const double log_n_fact = std::lgamma(n + 1.0);
  for (std::uint64_t k = 0; k <= trials; ++k) {
    const double kk = static_cast<double>(k);
    const double log_choose = log_n_fact - std::lgamma(kk + 1.0) - std::lgamma(n - kk + 1.0);
    out[k] = std::exp(log_choose + kk * log_p + (n - kk) * log_q);
  }
  return out;
}

double poisson_pmf(double lambda, std::uint64_t k) {
  if (lambda == 0.0) return k == 0 ? 1.0 : 0.0;
  const double kk = static_cast<double>(k);
  return std::exp(kk * std::log(lambda) - lambda - std::lgamma(kk + 1.0));
}

}  // namespace superpose
