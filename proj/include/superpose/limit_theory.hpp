#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "superpose/layer_model.hpp"
#include "superpose/pmf.hpp"

namespace superpose {

/// Large-n regime: m/n -> mu with layer types drawn from `dist`.
struct LimitParams {
  double mu = 1.0;
  LayerTypeDistribution dist = LayerTypeDistribution::constant(2, 1.0);
  double tail_epsilon = 1e-10;
};

/// Law g of the number of neighbours a node gains from one layer containing it:
/// mixture of Bin(x-1, y) with weights x P(x, y) / P10. Throws ZeroP10.
Pmf1D increment_pmf(const LimitParams& params);

/// Compound Poisson CPoi(lambda, g) by the Panjer recursion
///   f(0) = exp(-lambda (1 - g(0))),  f(s) = (lambda / s) sum_{k=1}^{s} k g(k) f(s-k),
/// truncated at the first s where the remaining tail mass, and the remaining
/// share of the mean, are both below tail_epsilon.
/// Throws InvalidLambda unless lambda > 0 and finite.
Pmf1D compound_poisson_pmf(double lambda, const Pmf1D& g, double tail_epsilon);

/// Limiting degree law CPoi(mu P10, increment_pmf).
Pmf1D limiting_degree_pmf(const LimitParams& params);

/// Joint law of the neighbour counts two endpoints of an edge get from the
/// layer that produced the edge: mixture over the edge-biased layer law of
/// Bin(x-2, y) x Bin(x-2, y). Throws ZeroEdgeMass.
Pmf2D fprime2_pmf(const LimitParams& params);

/// Limiting bidegree law delta_(1,1) * (f1 x f1) * f'2, evaluated directly as
/// the mixture over edge-biased layer types of shifted (f1 * Bin) x (f1 * Bin).
/// mass_defect = 2 x defect(f1); f'2 itself is exact.
Pmf2D limiting_bidegree_pmf(const LimitParams& params);

/// Closed-form limiting assortativity
///   [P21 (P43 + P33) - P32^2] / [P21 (P43 + P32) - P32^2 + mu P21^2 (P21 + P32)].
double limiting_assortativity(const LimitParams& params);

struct MomentReport {
  double lambda = 0.0;                // mu P10
  double increment_mean = 0.0;        // E H
  double increment_second = 0.0;      // E H^2
  double increment_third = 0.0;       // E H^3
  double degree_mean = 0.0;           // E D
  double degree_variance = 0.0;       // Var D
  double degree_third = 0.0;          // E D^3
  double prime_mean = 0.0;            // E D'
  double prime_second = 0.0;          // E D'^2
  double prime_variance = 0.0;        // Var D'
  double prime_covariance = 0.0;      // Cov(D'_1, D'_2)
};

/// Moments of the limiting laws from the cross moments alone.
MomentReport limiting_moments(const LimitParams& params);

struct RankCorrelations {
  double kendall = 0.0;
  double spearman = 0.0;
  double mass_defect = 0.0;
};

RankCorrelations limiting_rank_correlations(const LimitParams& params);

struct TailPrediction {
  double marginal_exponent = 0.0;  // (alpha - 2) / (1 - beta)
  double c_prime = 0.0;
  double c_double_prime = 0.0;
  double a = 0.0;  // power-law constant of the size law
  double p21 = 0.0;

  /// c' t^-exponent.
  double marginal_tail(double t) const;
  /// c'' (t2 - t1)^(-1 - exponent) t1^-exponent. Meaningful only when
  /// (t2 - t1) / bivariate_window(t2) is large; near the diagonal there is no
  /// prediction.
  double bivariate_tail(double t1, double t2) const;
};

/// t^(1/2) ln^4(2 + t): the bivariate tail formula needs t2 - t1 to dominate this.
double bivariate_window(double t);

/// Power-law tail constants. Requires the power_law family with matching
/// alpha, beta, b. Throws HypothesisViolation listing every failed condition
/// among alpha > 2, beta in [0,1), alpha + beta > 3, b > 0, (beta = 0 => b < 1),
/// and mu > 0.
TailPrediction tail_prediction(double alpha, double beta, double b, double mu,
                               const LayerTypeDistribution& dist);

}  // namespace superpose
