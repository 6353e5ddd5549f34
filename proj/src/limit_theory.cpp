#include "superpose/limit_theory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "superpose/empirical_stats.hpp"
#include "superpose/error.hpp"
#include "superpose/numeric.hpp"

namespace superpose {
namespace {

// Recursion is abandoned past this many support points; such a law is far
// outside anything the simulator can be compared against.
constexpr std::size_t kMaxCompoundSupport = 10'000'000;

void check_mu(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw Error(ErrorKind::invalid_argument, "mu must be positive and finite");
  }
}

void check_epsilon(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorKind::invalid_argument, "tail_epsilon must lie in (0,1)");
}

}  // namespace

Pmf1D increment_pmf(const LimitParams& params) {
  const double p10 = cross_moment(params.dist, 1, 0);
  if (!(p10 > 0.0)) throw Error(ErrorKind::zero_p10, "P10 = 0: layers have no nodes");

  std::vector<CompensatedSum> acc(params.dist.max_size(), CompensatedSum{});
  for (const auto& atom : params.dist.atoms()) {
    if (atom.type.size == 0 || atom.probability == 0.0) continue;
    const double weight = static_cast<double>(atom.type.size) * atom.probability / p10;
    const auto bin = binomial_pmf(atom.type.size - 1, atom.type.strength);
    for (std::size_t s = 0; s < bin.size(); ++s) acc[s] += weight * bin[s];
  }
  Pmf1D g;
  g.prob.resize(acc.size());
  for (std::size_t s = 0; s < acc.size(); ++s) g.prob[s] = acc[s].value();
  while (g.prob.size() > 1 && g.prob.back() == 0.0) g.prob.pop_back();
  return g;
}

Pmf1D compound_poisson_pmf(double lambda, const Pmf1D& g, double tail_epsilon) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorKind::invalid_lambda, "compound Poisson rate must be positive and finite");
  }
  check_epsilon(tail_epsilon);
  if (g.size() == 0) throw Error(ErrorKind::invalid_argument, "increment pmf is empty");

  const double g0 = g[0];
  Pmf1D f;
  const double f0 = std::exp(-lambda * (1.0 - g0));
  if (!(f0 > 0.0)) {
    throw Error(ErrorKind::invalid_lambda,
                "rate too large for the recursion: exp(-lambda (1 - g(0))) underflows");
  }
  f.prob.push_back(f0);
  CompensatedSum cumulative;
  cumulative += f0;

  // k g(k), precomputed over the increment support.
  std::vector<double> kg(g.size(), 0.0);
  CompensatedSum g_mean;
  for (std::size_t k = 1; k < g.size(); ++k) {
    kg[k] = static_cast<double>(k) * g.prob[k];
    g_mean += kg[k];
  }

  // Also run until the first-moment tail is small relative to the mean, so a
  // size-biased view of the truncated law is accurate to the same tolerance.
  const double mean = lambda * g_mean.value();
  CompensatedSum first_moment;
  auto first_moment_tail = [&] { return mean > 0.0 ? (mean - first_moment.value()) / mean : 0.0; };

  std::size_t zero_run = 0;
  while ((1.0 - cumulative.value() >= tail_epsilon || first_moment_tail() >= tail_epsilon) &&
         zero_run < kg.size()) {
    const std::size_t s = f.prob.size();
    if (s > kMaxCompoundSupport) {
      throw Error(ErrorKind::invalid_lambda, "compound Poisson support exceeds the truncation cap");
    }
    CompensatedSum acc;
    const std::size_t kmax = std::min(s, kg.size() - 1);
    for (std::size_t k = 1; k <= kmax; ++k) acc += kg[k] * f.prob[s - k];
    const double fs = lambda / static_cast<double>(s) * acc.value();
    f.prob.push_back(fs);
    cumulative += fs;
    first_moment += static_cast<double>(s) * fs;
    zero_run = fs == 0.0 ? zero_run + 1 : 0;
  }
  f.mass_defect = std::max(0.0, 1.0 - cumulative.value());
  return f;
}

Pmf1D limiting_degree_pmf(const LimitParams& params) {
  check_mu(params.mu);
  const Pmf1D g = increment_pmf(params);
  const double lambda = params.mu * cross_moment(params.dist, 1, 0);
  return compound_poisson_pmf(lambda, g, params.tail_epsilon);
}

Pmf2D fprime2_pmf(const LimitParams& params) {
  const LayerTypeDistribution edge_law = edge_biased_distribution(params.dist);
  const std::uint64_t top = edge_law.max_size();
  const std::size_t dim = top - 1;  // every atom has size >= 2
  std::vector<CompensatedSum> acc(dim * dim);
  for (const auto& atom : edge_law.atoms()) {
    if (atom.probability == 0.0) continue;
    const auto bin = binomial_pmf(atom.type.size - 2, atom.type.strength);
    for (std::size_t s = 0; s < bin.size(); ++s) {
      if (bin[s] == 0.0) continue;
      const double ws = atom.probability * bin[s];
      for (std::size_t t = s; t < bin.size(); ++t) acc[s * dim + t] += ws * bin[t];
    }
  }
  // Upper triangle only, mirrored, so the result is exactly symmetric.
  Pmf2D f(dim, dim);
  for (std::size_t s = 0; s < dim; ++s) {
    for (std::size_t t = s; t < dim; ++t) f.ref(s, t) = f.ref(t, s) = acc[s * dim + t].value();
  }
  f.shrink_to_support();
  return f;
}

Pmf2D limiting_bidegree_pmf(const LimitParams& params) {
  const Pmf1D f1 = limiting_degree_pmf(params);
  const LayerTypeDistribution edge_law = edge_biased_distribution(params.dist);

  // f'2 is a mixture of product laws Bin(x-2,y) x Bin(x-2,y), so convolving it
  // with the product f1 x f1 is the same mixture of (f1 * Bin) x (f1 * Bin).
  const std::size_t dim = f1.size() + edge_law.max_size() - 1;
  std::vector<CompensatedSum> acc(dim * dim);
  std::vector<double> row;
  for (const auto& atom : edge_law.atoms()) {
    if (atom.probability == 0.0) continue;
    const auto bin = binomial_pmf(atom.type.size - 2, atom.type.strength);
    row.assign(f1.size() + bin.size() - 1, 0.0);
    for (std::size_t k = 0; k < bin.size(); ++k) {
      if (bin[k] == 0.0) continue;
      for (std::size_t s = 0; s < f1.size(); ++s) row[k + s] += bin[k] * f1.prob[s];
    }
    for (std::size_t s = 0; s < row.size(); ++s) {
      const double ws = atom.probability * row[s];
      if (ws == 0.0) continue;
      CompensatedSum* out_row = &acc[(1 + s) * dim + 1];
      for (std::size_t t = s; t < row.size(); ++t) out_row[t] += ws * row[t];
    }
  }
  Pmf2D out(dim, dim);
  for (std::size_t s = 0; s < dim; ++s) {
    for (std::size_t t = s; t < dim; ++t) out.ref(s, t) = out.ref(t, s) = acc[s * dim + t].value();
  }
  out.mass_defect = 2.0 * f1.mass_defect;
  out.shrink_to_support();
  return out;
}

double limiting_assortativity(const LimitParams& params) {
  check_mu(params.mu);
  const CrossMoments p = cross_moments(params.dist);
  if (!(p.p21 > 0.0)) throw Error(ErrorKind::zero_edge_mass, "P21 = 0: no edges in the limit");

  // With a = (x)2 y and e = (x)2 (x-2)^2 y^3 = [(x)4 + (x)3] y^3, and (x)3 y^2 = sqrt(a e),
  //   P21 (P43 + P33) - P32^2 = 1/2 sum_ij p_i p_j (sqrt(a_i e_j) - sqrt(a_j e_i))^2,
  // a sum of squares that cannot cancel below zero.
  struct Term {
    double p, a, e;
  };
  std::vector<Term> terms;
  CompensatedSum p32_minus_p33;
  for (const auto& atom : params.dist.atoms()) {
    const double x = static_cast<double>(atom.type.size);
    const double y = atom.type.strength;
    if (atom.type.size < 2 || y == 0.0 || atom.probability == 0.0) continue;
    const double x2 = x * (x - 1.0);
    terms.push_back({atom.probability, x2 * y, x2 * (x - 2.0) * (x - 2.0) * y * y * y});
    p32_minus_p33 += atom.probability * x2 * (x - 2.0) * y * y * (1.0 - y);
  }
  CompensatedSum numerator;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (std::size_t j = i + 1; j < terms.size(); ++j) {
      const double d = std::sqrt(terms[i].a * terms[j].e) - std::sqrt(terms[j].a * terms[i].e);
      numerator += terms[i].p * terms[j].p * d * d;
    }
  }
  // The denominator is the numerator plus P21 (P32 - P33) plus the mu term.
  const double denominator =
      numerator.value() + p.p21 * p32_minus_p33.value() + params.mu * p.p21 * p.p21 * (p.p21 + p.p32);
  if (!(denominator > 0.0)) throw Error(ErrorKind::zero_denominator, "assortativity denominator vanishes");
  return numerator.value() / denominator;
}

MomentReport limiting_moments(const LimitParams& params) {
  check_mu(params.mu);
  const CrossMoments p = cross_moments(params.dist);
  if (!(p.p10 > 0.0)) throw Error(ErrorKind::zero_p10, "P10 = 0: layers have no nodes");
  if (!(p.p21 > 0.0)) throw Error(ErrorKind::zero_edge_mass, "P21 = 0: no edges in the limit");
  const double mu = params.mu;

  MomentReport r;
  r.lambda = mu * p.p10;
  r.increment_mean = p.p21 / p.p10;
  r.increment_second = (p.p21 + p.p32) / p.p10;
  r.increment_third = (p.p21 + 3.0 * p.p32 + p.p43) / p.p10;
  r.degree_mean = r.lambda * r.increment_mean;
  r.degree_variance = r.lambda * r.increment_second;
  r.degree_third = mu * (p.p21 + 3.0 * p.p32 + p.p43) + 3.0 * mu * mu * (p.p21 + p.p32) * p.p21 +
                   mu * mu * mu * p.p21 * p.p21 * p.p21;
  r.prime_mean = p.p32 / p.p21;
  r.prime_second = (p.p43 + p.p32) / p.p21;
  r.prime_variance = r.prime_second - r.prime_mean * r.prime_mean;
  r.prime_covariance = (p.p43 + p.p33) / p.p21 - r.prime_mean * r.prime_mean;
  return r;
}

RankCorrelations limiting_rank_correlations(const LimitParams& params) {
  const Pmf2D f = limiting_bidegree_pmf(params);
  return {kendall(f), spearman(f), f.mass_defect};
}

double TailPrediction::marginal_tail(double t) const { return c_prime * std::pow(t, -marginal_exponent); }

double TailPrediction::bivariate_tail(double t1, double t2) const {
  return c_double_prime * std::pow(t2 - t1, -1.0 - marginal_exponent) * std::pow(t1, -marginal_exponent);
}

double bivariate_window(double t) { return std::sqrt(t) * std::pow(std::log(2.0 + t), 4.0); }

TailPrediction tail_prediction(double alpha, double beta, double b, double mu,
                               const LayerTypeDistribution& dist) {
  std::vector<std::string> violated;
  if (!(alpha > 2.0)) violated.emplace_back("alpha > 2");
  if (!(beta >= 0.0 && beta < 1.0)) violated.emplace_back("beta in [0,1)");
  if (!(alpha + beta > 3.0)) violated.emplace_back("alpha + beta > 3");
  if (!(b > 0.0)) violated.emplace_back("b > 0");
  if (beta == 0.0 && !(b < 1.0)) violated.emplace_back("b < 1 when beta = 0");
  if (!(mu > 0.0)) violated.emplace_back("mu > 0");
  if (!violated.empty()) {
    std::string msg = "tail prediction hypotheses violated:";
    for (std::size_t i = 0; i < violated.size(); ++i) msg += (i ? ", " : " ") + violated[i];
    throw Error(ErrorKind::hypothesis_violation, msg);
  }

  const auto& pl = dist.power_law_params();
  if (!pl) throw Error(ErrorKind::invalid_argument, "tail prediction requires a power_law layer distribution");
  if (pl->alpha != alpha || pl->beta != beta || pl->b != b) {
    throw Error(ErrorKind::invalid_argument, "alpha, beta, b do not match the layer distribution");
  }

  TailPrediction out;
  out.marginal_exponent = (alpha - 2.0) / (1.0 - beta);
  out.a = power_law_constant(dist);
  out.p21 = cross_moment(dist, 2, 1);
  out.c_prime = out.a * std::pow(b, out.marginal_exponent) / (1.0 - beta) / out.p21;
  out.c_double_prime = mu * out.a * out.a * std::pow(b, 2.0 * out.marginal_exponent) /
                       ((1.0 - beta) * (1.0 - beta)) / out.p21;
  return out;
}

}  // namespace superpose
