#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "superpose/empirical_stats.hpp"
#include "superpose/limit_theory.hpp"
#include "test_support.hpp"

using namespace superpose;

namespace {

LayerTypeDistribution two_point() {
  return LayerTypeDistribution::tabular({{{2, 1.0}, 0.5}, {{4, 1.0}, 0.5}});
}

LimitParams params(double mu, LayerTypeDistribution d, double eps = 1e-10) { return {mu, std::move(d), eps}; }

std::vector<std::vector<double>> dense(const Pmf2D& f) {
  std::vector<std::vector<double>> out(f.rows(), std::vector<double>(f.cols()));
  for (std::size_t s = 0; s < f.rows(); ++s)
    for (std::size_t t = 0; t < f.cols(); ++t) out[s][t] = f.at(s, t);
  return out;
}

}  // namespace

TEST(IncrementPmf, Examples) {
  const Pmf1D a = increment_pmf(params(1, LayerTypeDistribution::constant(2, 1.0)));
  EXPECT_EQ(a[1], 1.0);
  EXPECT_EQ(a[0], 0.0);

  const Pmf1D b = increment_pmf(params(1, LayerTypeDistribution::constant(3, 0.5)));
  EXPECT_DOUBLE_EQ(b[0], 0.25);
  EXPECT_DOUBLE_EQ(b[1], 0.5);
  EXPECT_DOUBLE_EQ(b[2], 0.25);

  const Pmf1D c = increment_pmf(params(1, two_point()));
  EXPECT_NEAR(c[1], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(c[3], 2.0 / 3.0, 1e-15);
  EXPECT_EQ(c[0], 0.0);
  EXPECT_EQ(c[2], 0.0);
}

TEST(IncrementPmf, ZeroP10) {
  EXPECT_ERROR_KIND(increment_pmf(params(1, LayerTypeDistribution::constant(0, 0.5))), ErrorKind::zero_p10);
}

TEST(IncrementPmf, MixtureOfBinomialsOnRandomTables) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 100; ++i) {
    const auto d = oracle::random_tabular(rng, 1 + i % 5, 20);
    const double p10 = oracle::cross_moment(d, 1, 0);
    if (p10 <= 0) continue;
    std::vector<double> want(d.max_size() + 1, 0.0);
    for (const auto& a : d.atoms()) {
      const int x = static_cast<int>(a.type.size);
      for (int s = 0; s + 1 <= x; ++s) want[s] += oracle::binom(x - 1, s, a.type.strength) * x * a.probability / p10;
    }
    const Pmf1D g = increment_pmf(params(1, d));
    for (std::size_t s = 0; s < want.size(); ++s) EXPECT_NEAR(g[s], want[s], 1e-13);
  }
}

TEST(CompoundPoisson, PoissonSpecialCase) {
  const Pmf1D f = compound_poisson_pmf(1.0, Pmf1D::delta(1), 1e-12);
  EXPECT_NEAR(f[0], 0.3678794411714423, 1e-15);
  for (int k = 0; k < 15; ++k) EXPECT_NEAR(f[k], oracle::poisson(1.0, k), 1e-15);
  EXPECT_LT(f.mass_defect, 1e-12);
  EXPECT_GE(f.mass_defect, 0.0);
}

TEST(CompoundPoisson, ZeroIncrementsGivePointMass) {
  for (double lambda : {0.1, 3.0, 40.0}) {
    const Pmf1D f = compound_poisson_pmf(lambda, Pmf1D::delta(0), 1e-10);
    EXPECT_EQ(f[0], 1.0);
    EXPECT_EQ(f.size(), 1u);
  }
}

TEST(CompoundPoisson, ThinningIdentity) {
  const Pmf1D f = compound_poisson_pmf(2.0, Pmf1D{{0.5, 0.5}, 0.0}, 1e-13);
  const std::vector<double> brute = oracle::compound_poisson_brute(2.0, {0.5, 0.5}, 20, 60);
  for (int s = 0; s < 20; ++s) {
    EXPECT_NEAR(f[s], oracle::poisson(1.0, s), 1e-14 + f.mass_defect);
    EXPECT_NEAR(brute[s], oracle::poisson(1.0, s), 1e-14);
  }
}

TEST(CompoundPoisson, InvalidLambda) {
  EXPECT_ERROR_KIND(compound_poisson_pmf(0.0, Pmf1D::delta(1), 1e-10), ErrorKind::invalid_lambda);
  EXPECT_ERROR_KIND(compound_poisson_pmf(-1.0, Pmf1D::delta(1), 1e-10), ErrorKind::invalid_lambda);
  EXPECT_ERROR_KIND(compound_poisson_pmf(std::nan(""), Pmf1D::delta(1), 1e-10), ErrorKind::invalid_lambda);
}

TEST(CompoundPoissonProperty, RecursionMatchesConvolutionPowers) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 40; ++i) {
    const double lambda = 0.05 + 4.95 * u(rng);
    const std::size_t support = 1 + rng() % 50;
    std::vector<double> g(support);
    double total = 0;
    for (double& p : g) total += p = u(rng) < 0.3 ? 0.0 : u(rng);
    if (total == 0) g[0] = total = 1;
    for (double& p : g) p /= total;
    const Pmf1D f = compound_poisson_pmf(lambda, Pmf1D{g, 0.0}, 1e-14);
    const std::size_t len = std::min<std::size_t>(f.size(), 200);
    const auto brute = oracle::compound_poisson_brute(lambda, g, len, 80);
    for (std::size_t s = 0; s < len; ++s) EXPECT_NEAR(f[s], brute[s], 1e-10) << "lambda=" << lambda;
    EXPECT_NEAR(f.total() + f.mass_defect, 1.0, 1e-12);
  }
}

TEST(CompoundPoissonProperty, MomentsMatchIncrementMoments) {
  std::mt19937_64 rng(33);
  for (int i = 0; i < 30; ++i) {
    const auto d = oracle::random_tabular(rng, 1 + i % 4, 15);
    const double mu = 0.3 + (i % 5) * 0.5;
    if (oracle::cross_moment(d, 1, 0) <= 0) continue;
    const LimitParams lp = params(mu, d, 1e-14);
    const Pmf1D g = increment_pmf(lp);
    const Pmf1D f = limiting_degree_pmf(lp);
    const double lambda = mu * oracle::cross_moment(d, 1, 0);
    double eh = 0, eh2 = 0, m1 = 0, m2 = 0;
    for (std::size_t s = 0; s < g.size(); ++s) eh += s * g[s], eh2 += double(s) * s * g[s];
    for (std::size_t s = 0; s < f.size(); ++s) m1 += s * f[s], m2 += double(s) * s * f[s];
    EXPECT_NEAR(m1, lambda * eh, 1e-8 * std::max(1.0, m1));
    EXPECT_NEAR(m2 - m1 * m1, lambda * eh2, 1e-7 * std::max(1.0, m2));
  }
}

TEST(LimitingDegree, Examples) {
  const Pmf1D f = limiting_degree_pmf(params(0.5, LayerTypeDistribution::constant(2, 1.0)));
  for (int k = 0; k < 12; ++k) EXPECT_NEAR(f[k], oracle::poisson(1.0, k), 1e-15);

  const Pmf1D z = limiting_degree_pmf(params(2.0, LayerTypeDistribution::constant(5, 0.0)));
  EXPECT_EQ(z[0], 1.0);

  const Pmf1D m = limiting_degree_pmf(params(1.0, LayerTypeDistribution::constant(3, 0.5)));
  EXPECT_NEAR(m.mean(), 3.0, 1e-8);
}

TEST(Fprime2, Examples) {
  const Pmf2D a = fprime2_pmf(params(1, LayerTypeDistribution::constant(3, 1.0)));
  EXPECT_EQ(a.at(1, 1), 1.0);
  EXPECT_EQ(a.total(), 1.0);

  EXPECT_NEAR(fprime2_pmf(params(1, LayerTypeDistribution::constant(4, 0.5))).at(1, 1), 0.25, 1e-15);

  for (double y : {0.1, 0.7, 1.0}) {
    const Pmf2D c = fprime2_pmf(params(1, LayerTypeDistribution::constant(2, y)));
    EXPECT_EQ(c.at(0, 0), 1.0);
  }
  EXPECT_ERROR_KIND(fprime2_pmf(params(1, LayerTypeDistribution::constant(1, 1.0))), ErrorKind::zero_edge_mass);
}

TEST(Fprime2Property, SymmetricAndNormalized) {
  std::mt19937_64 rng(34);
  for (int i = 0; i < 200; ++i) {
    const auto d = oracle::random_tabular(rng, 1 + i % 6, 30);
    if (oracle::cross_moment(d, 2, 1) <= 0) continue;
    const Pmf2D f = fprime2_pmf(params(1, d));
    EXPECT_NEAR(f.total(), 1.0, 1e-12);
    for (std::size_t s = 0; s < f.rows(); ++s)
      for (std::size_t t = 0; t < f.cols(); ++t) EXPECT_EQ(f.at(s, t), f.at(t, s));
  }
}

TEST(LimitingBidegree, ConstantTwoOneIsShiftedPoissonProduct) {
  const Pmf2D f = limiting_bidegree_pmf(params(0.5, LayerTypeDistribution::constant(2, 1.0)));
  EXPECT_NEAR(f.at(1, 1), std::exp(-2.0), 1e-15);
  EXPECT_NEAR(f.at(1, 1), 0.1353353, 1e-7);
  for (int s = 0; s < 8; ++s)
    for (int t = 0; t < 8; ++t)
      EXPECT_NEAR(f.at(s + 1, t + 1), oracle::poisson(1, s) * oracle::poisson(1, t), 1e-15);
}

TEST(LimitingBidegree, SupportStartsAtOneOne) {
  std::mt19937_64 rng(35);
  for (int i = 0; i < 50; ++i) {
    const auto d = oracle::random_tabular(rng, 1 + i % 4, 12);
    if (oracle::cross_moment(d, 2, 1) <= 0) continue;
    const Pmf2D f = limiting_bidegree_pmf(params(0.5 + i % 3, d));
    for (std::size_t s = 0; s < f.rows(); ++s) EXPECT_EQ(f.at(s, 0), 0.0);
    for (std::size_t t = 0; t < f.cols(); ++t) EXPECT_EQ(f.at(0, t), 0.0);
  }
}

TEST(LimitingBidegree, MatchesGenericTwoDimensionalConvolution) {
  std::mt19937_64 rng(36);
  for (int i = 0; i < 15; ++i) {
    const auto d = oracle::random_tabular(rng, 1 + i % 4, 10);
    if (oracle::cross_moment(d, 2, 1) <= 0) continue;
    const LimitParams lp = params(0.4 + 0.3 * (i % 4), d);
    const Pmf1D f1 = limiting_degree_pmf(lp);
    const Pmf2D fp = fprime2_pmf(lp);
    const auto prod = dense(Pmf2D::product(f1, f1));
    const auto want = oracle::convolve2d(prod, dense(fp));
    const Pmf2D got = limiting_bidegree_pmf(lp);
    for (std::size_t s = 0; s < want.size(); ++s)
      for (std::size_t t = 0; t < want[s].size(); ++t)
        EXPECT_NEAR(got.at(s + 1, t + 1), want[s][t], 1e-14);
    EXPECT_NEAR(got.total() + got.mass_defect, 1.0, 1e-9);
  }
}

TEST(LimitingBidegreeProperty, MarginalsAreSizeBiasedDegreeLaw) {
  std::mt19937_64 rng(37);
  for (int i = 0; i < 20; ++i) {
    const auto d = oracle::random_tabular(rng, 1 + i % 5, 25);
    if (oracle::cross_moment(d, 2, 1) <= 0) continue;
    const LimitParams lp = params(0.5 + 0.25 * (i % 6), d, 1e-12);
    const Pmf1D star = size_biased(limiting_degree_pmf(lp));
    const Pmf2D f = limiting_bidegree_pmf(lp);
    // Size-biasing renormalizes by the truncated mean, whose relative error is
    // bounded by the truncation tolerance.
    const double tol = f.mass_defect + star.mass_defect + lp.tail_epsilon;
    const Pmf1D m1 = f.marginal_first(), m2 = f.marginal_second();
    for (std::size_t s = 0; s < std::max(m1.size(), star.size()); ++s) {
      EXPECT_NEAR(m1[s], star[s], tol);
      EXPECT_NEAR(m2[s], star[s], tol);
    }
  }
}

TEST(Assortativity, ConstantLawsGiveZero) {
  for (std::uint64_t x : {3u, 4u, 5u})
    for (double y : {0.5, 1.0})
      for (double mu : {0.5, 1.0, 3.0})
        EXPECT_NEAR(limiting_assortativity(params(mu, LayerTypeDistribution::constant(x, y))), 0.0, 1e-15);
}

TEST(Assortativity, TwoPointWorkedValue) {
  EXPECT_NEAR(limiting_assortativity(params(1.0, two_point())), 24.0 / 955.0, 1e-15);
}

TEST(Assortativity, NoEdges) {
  EXPECT_ERROR_KIND(limiting_assortativity(params(1.0, LayerTypeDistribution::constant(5, 0.0))),
                    ErrorKind::zero_edge_mass);
}

TEST(AssortativityProperty, NonNegativeAndMatchesPearsonOfLimit) {
  std::mt19937_64 rng(38);
  int compared = 0;
  for (int i = 0; i < 60; ++i) {
    const auto d = oracle::random_tabular(rng, 1 + i % 5, 12);
    if (oracle::cross_moment(d, 2, 1) <= 0) continue;
    const double mu = 0.5 * (1 + i % 4);
    const double r = limiting_assortativity(params(mu, d));
    EXPECT_GE(r, -1e-15);
    const Pmf2D f = limiting_bidegree_pmf(params(mu, d, 1e-13));
    if (f.mass_defect >= 1e-8) continue;
    try {
      EXPECT_NEAR(pearson_correlation(f), r, 1e-6);
      ++compared;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::degenerate_marginal);
    }
  }
  EXPECT_GT(compared, 20);
}

TEST(Moments, Examples) {
  const MomentReport a = limiting_moments(params(1.0, LayerTypeDistribution::constant(3, 0.5)));
  EXPECT_DOUBLE_EQ(a.prime_mean, 0.5);
  EXPECT_DOUBLE_EQ(a.degree_mean, 3.0);

  EXPECT_EQ(limiting_moments(params(1.0, LayerTypeDistribution::constant(2, 1.0))).prime_variance, 0.0);

  const MomentReport c = limiting_moments(params(1.0, two_point()));
  EXPECT_NEAR(c.prime_covariance, 24.0 / 49.0, 1e-15);
  EXPECT_NEAR(c.lambda, 3.0, 1e-15);
}

TEST(MomentsProperty, AgreeWithTruncatedLaws) {
  std::mt19937_64 rng(39);
  for (int i = 0; i < 20; ++i) {
    const auto d = oracle::random_tabular(rng, 1 + i % 4, 12);
    if (oracle::cross_moment(d, 2, 1) <= 0) continue;
    const double mu = 0.5 + 0.5 * (i % 3);
    const LimitParams lp = params(mu, d, 1e-14);
    const MomentReport m = limiting_moments(lp);

    const Pmf1D g = increment_pmf(lp);
    double h1 = 0, h2 = 0, h3 = 0;
    for (std::size_t s = 0; s < g.size(); ++s) {
      const double x = static_cast<double>(s);
      h1 += x * g[s], h2 += x * x * g[s], h3 += x * x * x * g[s];
    }
    EXPECT_NEAR(m.increment_mean, h1, 1e-12 * std::max(1.0, h1));
    EXPECT_NEAR(m.increment_second, h2, 1e-12 * std::max(1.0, h2));
    EXPECT_NEAR(m.increment_third, h3, 1e-12 * std::max(1.0, h3));

    const Pmf1D f = limiting_degree_pmf(lp);
    double d1 = 0, d2 = 0, d3 = 0;
    for (std::size_t s = 0; s < f.size(); ++s) {
      const double x = static_cast<double>(s);
      d1 += x * f[s], d2 += x * x * f[s], d3 += x * x * x * f[s];
    }
    EXPECT_NEAR(m.degree_mean, d1, 1e-8 * std::max(1.0, d1));
    EXPECT_NEAR(m.degree_variance, d2 - d1 * d1, 1e-7 * std::max(1.0, d2));
    EXPECT_NEAR(m.degree_third, d3, 1e-7 * std::max(1.0, d3));

    // Second moment of the size-biased law equals E D^3 / E D.
    const Pmf1D star = size_biased(f);
    double s2 = 0;
    for (std::size_t s = 0; s < star.size(); ++s) s2 += double(s) * s * star[s];
    EXPECT_NEAR(s2, m.degree_third / m.degree_mean, 1e-7 * std::max(1.0, s2));

    const Pmf2D fp = fprime2_pmf(lp);
    double p1 = 0, p2 = 0, p12 = 0;
    for (std::size_t s = 0; s < fp.rows(); ++s)
      for (std::size_t t = 0; t < fp.cols(); ++t) {
        const double w = fp.at(s, t);
        p1 += s * w, p2 += double(s) * s * w, p12 += double(s) * t * w;
      }
    EXPECT_NEAR(m.prime_mean, p1, 1e-12 * std::max(1.0, p1));
    EXPECT_NEAR(m.prime_second, p2, 1e-12 * std::max(1.0, p2));
    EXPECT_NEAR(m.prime_variance, p2 - p1 * p1, 1e-11 * std::max(1.0, p2));
    EXPECT_NEAR(m.prime_covariance, p12 - p1 * p1, 1e-11 * std::max(1.0, p2));
  }
}

TEST(RankCorrelations, ProductCaseIsZero) {
  const RankCorrelations r = limiting_rank_correlations(params(0.5, LayerTypeDistribution::constant(2, 1.0)));
  EXPECT_NEAR(r.kendall, 0.0, 1e-12);
  EXPECT_NEAR(r.spearman, 0.0, 1e-12);
}

TEST(RankCorrelations, TwoPointValuesArePositive) {
  const RankCorrelations r = limiting_rank_correlations(params(1.0, two_point()));
  EXPECT_GT(r.kendall, 0.0);
  EXPECT_LT(r.kendall, 1.0);
  EXPECT_GT(r.spearman, 0.0);
  EXPECT_LT(r.spearman, 1.0);
  EXPECT_LT(r.mass_defect, 1e-9);
}

TEST(RankCorrelations, StableUnderEpsilonHalving) {
  for (double eps : {1e-6, 1e-8, 1e-10}) {
    const RankCorrelations a = limiting_rank_correlations(params(1.0, two_point(), eps));
    const RankCorrelations b = limiting_rank_correlations(params(1.0, two_point(), eps / 2));
    EXPECT_NEAR(a.kendall, b.kendall, 10 * eps);
    EXPECT_NEAR(a.spearman, b.spearman, 10 * eps);
  }
}

TEST(TailPrediction, Exponents) {
  const auto d = LayerTypeDistribution::power_law({3.0, 0.5, 1.0, 1, 2000});
  EXPECT_DOUBLE_EQ(tail_prediction(3.0, 0.5, 1.0, 1.0, d).marginal_exponent, 2.0);
  const auto e = LayerTypeDistribution::power_law({2.5, 0.6, 1.0, 1, 2000});
  EXPECT_DOUBLE_EQ(tail_prediction(2.5, 0.6, 1.0, 1.0, e).marginal_exponent, 1.25);
}

TEST(TailPrediction, ConstantsFromConcreteLaw) {
  const PowerLawParams pl{3.0, 0.5, 2.0, 1, 500};
  const auto d = LayerTypeDistribution::power_law(pl);
  const double mu = 1.5;
  const TailPrediction t = tail_prediction(pl.alpha, pl.beta, pl.b, mu, d);
  double z = 0;
  for (int x = 1; x <= 500; ++x) z += std::pow(x, -3.0);
  const double a = (std::pow(500.0, -3.0) / z) * std::pow(500.0, 3.0);
  const double e = 2.0;
  const double p21 = oracle::cross_moment(d, 2, 1);
  EXPECT_NEAR(t.a, a, 1e-14);
  EXPECT_NEAR(t.p21, p21, 1e-10 * p21);
  EXPECT_NEAR(t.c_prime, a * std::pow(2.0, e) / 0.5 / p21, 1e-10 * t.c_prime);
  EXPECT_NEAR(t.c_double_prime, mu * a * a * std::pow(2.0, 2 * e) / 0.25 / p21, 1e-10 * t.c_double_prime);
  EXPECT_NEAR(t.marginal_tail(10.0), t.c_prime * std::pow(10.0, -e), 1e-15);
  EXPECT_NEAR(t.bivariate_tail(10.0, 50.0), t.c_double_prime * std::pow(40.0, -1 - e) * std::pow(10.0, -e), 1e-15);
  EXPECT_NEAR(bivariate_window(100.0), 10.0 * std::pow(std::log(102.0), 4), 1e-9);
}

TEST(TailPrediction, HypothesisViolations) {
  const auto d = LayerTypeDistribution::power_law({3.0, 0.5, 1.0, 1, 100});
  EXPECT_ERROR_KIND(tail_prediction(2.5, 0.4, 1.0, 1.0, d), ErrorKind::hypothesis_violation);
  EXPECT_ERROR_KIND(tail_prediction(2.0, 0.5, 1.0, 1.0, d), ErrorKind::hypothesis_violation);
  EXPECT_ERROR_KIND(tail_prediction(3.5, 1.0, 1.0, 1.0, d), ErrorKind::hypothesis_violation);
  EXPECT_ERROR_KIND(tail_prediction(3.5, -0.1, 1.0, 1.0, d), ErrorKind::hypothesis_violation);
  EXPECT_ERROR_KIND(tail_prediction(3.5, 0.0, 1.0, 1.0, d), ErrorKind::hypothesis_violation);
  EXPECT_ERROR_KIND(tail_prediction(3.0, 0.5, 0.0, 1.0, d), ErrorKind::hypothesis_violation);
  EXPECT_ERROR_KIND(tail_prediction(3.0, 0.5, 1.0, 0.0, d), ErrorKind::hypothesis_violation);
}

TEST(TailPrediction, ReportsEveryViolatedCondition) {
  const auto d = LayerTypeDistribution::power_law({3.0, 0.5, 1.0, 1, 100});
  try {
    tail_prediction(1.5, 0.0, 2.0, -1.0, d);
    FAIL() << "expected a violation";
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("alpha > 2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("alpha + beta > 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("b < 1"), std::string::npos) << msg;
    EXPECT_NE(msg.find("mu > 0"), std::string::npos) << msg;
  }
}

TEST(TailPrediction, BetaZeroWithSmallScaleIsAccepted) {
  const auto d = LayerTypeDistribution::power_law({3.5, 0.0, 0.5, 1, 100});
  EXPECT_DOUBLE_EQ(tail_prediction(3.5, 0.0, 0.5, 1.0, d).marginal_exponent, 1.5);
}
