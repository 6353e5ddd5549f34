#include "superpose/empirical_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "superpose/error.hpp"
#include "superpose/numeric.hpp"

namespace superpose {
namespace {

bool is_point_mass(const Pmf1D& m) {
  return std::count_if(m.prob.begin(), m.prob.end(), [](double p) { return p > 0.0; }) <= 1;
}

void require_nondegenerate(const Pmf2D& f, const Pmf1D& a, const Pmf1D& b) {
  if (!(f.total() > 0.0)) throw Error(ErrorKind::degenerate_marginal, "pmf has no mass");
  if (is_point_mass(a) || is_point_mass(b)) {
    throw Error(ErrorKind::degenerate_marginal, "marginal is a point mass; correlation undefined");
  }
}

struct Moments {
  double mean_a, mean_b, var_a, var_b, cov;
};

}  // namespace

std::uint64_t DegreeCounts::nodes() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

void DegreeCounts::merge(const DegreeCounts& other) {
  if (other.counts.size() > counts.size()) counts.resize(other.counts.size(), 0);
  for (std::size_t s = 0; s < other.counts.size(); ++s) counts[s] += other.counts[s];
}

Pmf1D DegreeCounts::to_pmf() const {
  const auto total = static_cast<double>(nodes());
  Pmf1D f;
  f.prob.resize(counts.size());
  for (std::size_t s = 0; s < counts.size(); ++s) f.prob[s] = static_cast<double>(counts[s]) / total;
  return f;
}

std::uint64_t BidegreeCounts::pairs() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

void BidegreeCounts::merge(const BidegreeCounts& other) {
  if (other.dim > dim) {
    std::vector<std::uint64_t> grown(other.dim * other.dim, 0);
    for (std::size_t s = 0; s < dim; ++s) {
      for (std::size_t t = 0; t < dim; ++t) grown[s * other.dim + t] = counts[s * dim + t];
    }
    counts = std::move(grown);
    dim = other.dim;
  }
  for (std::size_t s = 0; s < other.dim; ++s) {
    for (std::size_t t = 0; t < other.dim; ++t) counts[s * dim + t] += other.counts[s * other.dim + t];
  }
}

Pmf2D BidegreeCounts::to_pmf() const {
  const std::uint64_t total = pairs();
  if (total == 0) throw Error(ErrorKind::empty_graph, "bidegree distribution of a graph without edges");
  Pmf2D f(dim, dim);
  const auto denom = static_cast<double>(total);
  for (std::size_t s = 0; s < dim; ++s) {
    for (std::size_t t = 0; t < dim; ++t) f.ref(s, t) = static_cast<double>(counts[s * dim + t]) / denom;
  }
  return f;
}

DegreeCounts degree_counts(const GraphSample& g) {
  const auto deg = degrees(g);
  DegreeCounts out;
  const std::uint32_t max_deg = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
  out.counts.assign(max_deg + 1, 0);
  for (auto d : deg) ++out.counts[d];
  return out;
}

BidegreeCounts bidegree_counts(const GraphSample& g) {
  const auto deg = degrees(g);
  BidegreeCounts out;
  const std::uint32_t max_deg = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
  out.dim = max_deg + 1;
  out.counts.assign(out.dim * out.dim, 0);
  for (const auto& e : g.edges) {
    const std::size_t a = deg[e.u - 1];
    const std::size_t b = deg[e.v - 1];
    ++out.counts[a * out.dim + b];
    ++out.counts[b * out.dim + a];
  }
  return out;
}

Pmf1D degree_distribution(const GraphSample& g) {
  if (g.n == 0) throw Error(ErrorKind::invalid_argument, "degree distribution of an empty node set");
  return degree_counts(g).to_pmf();
}

Pmf2D bidegree_distribution(const GraphSample& g) {
  if (g.edges.empty()) throw Error(ErrorKind::empty_graph, "bidegree distribution of a graph without edges");
  auto f = bidegree_counts(g).to_pmf();
  f.shrink_to_support();
  return f;
}

Pmf1D size_biased(const Pmf1D& f) {
  const double mean = f.mean();
  if (!(mean > 0.0)) throw Error(ErrorKind::zero_mean, "size-biasing a law with zero mean");
  Pmf1D out;
  out.prob.resize(f.size());
  for (std::size_t s = 0; s < f.size(); ++s) out.prob[s] = static_cast<double>(s) * f.prob[s] / mean;
  return out;
}

namespace {

Moments pmf_moments(const Pmf2D& f) {
  const double total = f.total();
  const Pmf1D a = f.marginal_first();
  const Pmf1D b = f.marginal_second();
  CompensatedSum ma, mb;
  for (std::size_t s = 0; s < a.size(); ++s) ma += static_cast<double>(s) * a.prob[s];
  for (std::size_t t = 0; t < b.size(); ++t) mb += static_cast<double>(t) * b.prob[t];
  const double mean_a = ma.value() / total;
  const double mean_b = mb.value() / total;
  CompensatedSum va, vb, cv;
  for (std::size_t s = 0; s < a.size(); ++s) {
    const double d = static_cast<double>(s) - mean_a;
    va += d * d * a.prob[s];
  }
  for (std::size_t t = 0; t < b.size(); ++t) {
    const double d = static_cast<double>(t) - mean_b;
    vb += d * d * b.prob[t];
  }
  for (std::size_t s = 0; s < f.rows(); ++s) {
    const double ds = static_cast<double>(s) - mean_a;
    for (std::size_t t = 0; t < f.cols(); ++t) {
      const double p = f.at(s, t);
      if (p != 0.0) cv += ds * (static_cast<double>(t) - mean_b) * p;
    }
  }
  return {mean_a, mean_b, va.value() / total, vb.value() / total, cv.value() / total};
}

}  // namespace

double pearson_correlation(const Pmf2D& f) {
  const Pmf1D a = f.marginal_first();
  const Pmf1D b = f.marginal_second();
  require_nondegenerate(f, a, b);
  const Moments m = pmf_moments(f);
  return m.cov / std::sqrt(m.var_a * m.var_b);
}

double kendall(const Pmf2D& f) {
  const Pmf1D a = f.marginal_first();
  const Pmf1D b = f.marginal_second();
  require_nondegenerate(f, a, b);
  const std::size_t rows = f.rows();
  const std::size_t cols = f.cols();
  const double total = f.total();

  // below[i][j] = mass of {s < i, t < j}, normalized.
  std::vector<long double> below((rows + 1) * (cols + 1), 0.0L);
  auto at = [&](std::size_t i, std::size_t j) -> long double& { return below[i * (cols + 1) + j]; };
  for (std::size_t i = 0; i < rows; ++i) {
    long double row_run = 0.0L;
    for (std::size_t j = 0; j < cols; ++j) {
      row_run += static_cast<long double>(f.at(i, j) / total);
      at(i + 1, j + 1) = at(i, j + 1) + row_run;
    }
  }
  const long double all = at(rows, cols);

  CompensatedSum concordance;
  for (std::size_t s = 0; s < rows; ++s) {
    for (std::size_t t = 0; t < cols; ++t) {
      const double p = f.at(s, t);
      if (p == 0.0) continue;
      const long double lower_lower = at(s, t);
      const long double lower_upper = at(s, cols) - at(s, t + 1);
      const long double upper_lower = at(rows, t) - at(s + 1, t);
      const long double upper_upper = all - at(s + 1, cols) - at(rows, t + 1) + at(s + 1, t + 1);
      concordance += (p / total) *
                     static_cast<double>(lower_lower + upper_upper - lower_upper - upper_lower);
    }
  }
  CompensatedSum sq_a, sq_b;
  for (double p : a.prob) sq_a += (p / total) * (p / total);
  for (double p : b.prob) sq_b += (p / total) * (p / total);
  return concordance.value() / std::sqrt((1.0 - sq_a.value()) * (1.0 - sq_b.value()));
}

double spearman(const Pmf2D& f) {
  const Pmf1D a = f.marginal_first();
  const Pmf1D b = f.marginal_second();
  require_nondegenerate(f, a, b);
  const double total = f.total();

  // Mid-rank transform r(x) = (F(x-) + F(x)) / 2 of each marginal.
  auto mid_ranks = [total](const Pmf1D& m) {
    std::vector<double> r(m.size());
    long double below = 0.0L;
    for (std::size_t s = 0; s < m.size(); ++s) {
      const long double p = m.prob[s] / total;
      r[s] = static_cast<double>(below + p / 2.0L);
      below += p;
    }
    return r;
  };
  const auto ra = mid_ranks(a);
  const auto rb = mid_ranks(b);

  CompensatedSum ea, eb;
  for (std::size_t s = 0; s < a.size(); ++s) ea += ra[s] * a.prob[s] / total;
  for (std::size_t t = 0; t < b.size(); ++t) eb += rb[t] * b.prob[t] / total;
  const double mean_a = ea.value();
  const double mean_b = eb.value();
  CompensatedSum va, vb, cv;
  for (std::size_t s = 0; s < a.size(); ++s) va += (ra[s] - mean_a) * (ra[s] - mean_a) * a.prob[s] / total;
  for (std::size_t t = 0; t < b.size(); ++t) vb += (rb[t] - mean_b) * (rb[t] - mean_b) * b.prob[t] / total;
  for (std::size_t s = 0; s < f.rows(); ++s) {
    for (std::size_t t = 0; t < f.cols(); ++t) {
      const double p = f.at(s, t);
      if (p != 0.0) cv += (ra[s] - mean_a) * (rb[t] - mean_b) * p / total;
    }
  }
  return cv.value() / std::sqrt(va.value() * vb.value());
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> directed_degree_pairs(const GraphSample& g) {
  const auto deg = degrees(g);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  out.reserve(g.edges.size() * 2);
  for (const auto& e : g.edges) {
    out.emplace_back(deg[e.u - 1], deg[e.v - 1]);
    out.emplace_back(deg[e.v - 1], deg[e.u - 1]);
  }
  return out;
}

namespace {

// Number of inversions in v (pairs i < j with v[i] > v[j]); sorts v.
std::uint64_t count_inversions(std::vector<std::uint32_t>& v) {
  std::vector<std::uint32_t> buf(v.size());
  std::uint64_t inversions = 0;
  for (std::size_t width = 1; width < v.size(); width *= 2) {
    for (std::size_t lo = 0; lo < v.size(); lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, v.size());
      const std::size_t hi = std::min(lo + 2 * width, v.size());
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        if (v[j] < v[i]) {
          inversions += mid - i;
          buf[k++] = v[j++];
        } else {
          buf[k++] = v[i++];
        }
      }
      while (i < mid) buf[k++] = v[i++];
      while (j < hi) buf[k++] = v[j++];
    }
    v.swap(buf);
  }
  return inversions;
}

// Sum over tie groups of c(c-1)/2 for a sorted sequence.
template <typename It, typename Eq>
std::uint64_t tied_pairs(It first, It last, Eq eq) {
  std::uint64_t ties = 0;
  while (first != last) {
    It run_end = first;
    std::uint64_t c = 0;
    while (run_end != last && eq(*run_end, *first)) {
      ++run_end;
      ++c;
    }
    ties += c * (c - 1) / 2;
    first = run_end;
  }
  return ties;
}

std::vector<double> average_ranks(std::span<const std::uint32_t> xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return xs[i] < xs[j]; });
  std::vector<double> ranks(xs.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && xs[order[j]] == xs[order[i]]) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = avg;
    i = j;
  }
  return ranks;
}

double pearson_of(std::span<const double> x, std::span<const double> y) {
  CompensatedSum sx, sy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double n = static_cast<double>(x.size());
  const double mx = sx.value() / n;
  const double my = sy.value() / n;
  CompensatedSum vx, vy, cv;
  for (std::size_t i = 0; i < x.size(); ++i) {
    vx += (x[i] - mx) * (x[i] - mx);
    vy += (y[i] - my) * (y[i] - my);
    cv += (x[i] - mx) * (y[i] - my);
  }
  return cv.value() / std::sqrt(vx.value() * vy.value());
}

}  // namespace

SampleCorrelations sample_correlations(std::span<const std::pair<std::uint32_t, std::uint32_t>> obs) {
  if (obs.empty()) throw Error(ErrorKind::empty_graph, "no observations");
  std::vector<std::uint32_t> xs(obs.size()), ys(obs.size());
  for (std::size_t i = 0; i < obs.size(); ++i) {
    xs[i] = obs[i].first;
    ys[i] = obs[i].second;
  }
  auto all_equal = [](const std::vector<std::uint32_t>& v) {
    return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
  };
  if (all_equal(xs) || all_equal(ys)) {
    throw Error(ErrorKind::degenerate_marginal, "marginal is a point mass; correlation undefined");
  }

  SampleCorrelations out;
  {
    std::vector<double> dx(xs.begin(), xs.end()), dy(ys.begin(), ys.end());
    out.pearson = pearson_of(dx, dy);
  }
  {
    const auto rx = average_ranks(xs);
    const auto ry = average_ranks(ys);
    out.spearman = pearson_of(rx, ry);
  }
  {
    // Knight's O(N log N) tau-b.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> sorted(obs.begin(), obs.end());
    std::sort(sorted.begin(), sorted.end());
    const std::uint64_t n = sorted.size();
    const std::uint64_t n0 = n * (n - 1) / 2;
    const std::uint64_t ties_x = tied_pairs(sorted.begin(), sorted.end(),
                                            [](const auto& a, const auto& b) { return a.first == b.first; });
    const std::uint64_t ties_xy = tied_pairs(sorted.begin(), sorted.end(),
                                             [](const auto& a, const auto& b) { return a == b; });
    std::vector<std::uint32_t> y_seq(n);
    for (std::size_t i = 0; i < n; ++i) y_seq[i] = sorted[i].second;
    const std::uint64_t swaps = count_inversions(y_seq);
    const std::uint64_t ties_y = tied_pairs(y_seq.begin(), y_seq.end(), std::equal_to<>());
    const double s = static_cast<double>(n0) - static_cast<double>(ties_x) - static_cast<double>(ties_y) +
                     static_cast<double>(ties_xy) - 2.0 * static_cast<double>(swaps);
    out.kendall = s / std::sqrt(static_cast<double>(n0 - ties_x) * static_cast<double>(n0 - ties_y));
  }
  return out;
}

SubgraphMeans layer_subgraph_counts(std::span<const LayerRecord> records) {
  if (records.empty()) throw Error(ErrorKind::missing_records, "no layer records");
  CompensatedSum links, two, three;
  std::vector<std::uint64_t> local_deg;
  for (const auto& rec : records) {
    local_deg.assign(rec.nodes.size(), 0);
    auto index_of = [&](NodeId v) {
      return static_cast<std::size_t>(std::lower_bound(rec.nodes.begin(), rec.nodes.end(), v) - rec.nodes.begin());
    };
    for (const auto& e : rec.edges) {
      ++local_deg[index_of(e.u)];
      ++local_deg[index_of(e.v)];
    }
    double stars2 = 0.0;
    double stars3 = 0.0;
    for (auto d : local_deg) {
      const double dd = static_cast<double>(d);
      stars2 += dd * (dd - 1.0) / 2.0;
      stars3 += dd * (dd - 1.0) * (dd - 2.0) / 6.0;
    }
    links += static_cast<double>(rec.edges.size());
    two += stars2;
    three += stars3;
  }
  const double m = static_cast<double>(records.size());
  return {links.value() / m, two.value() / m, three.value() / m};
}

SubgraphMeans layer_subgraph_counts(const GraphSample& g) {
  if (!g.layer_records) throw Error(ErrorKind::missing_records, "graph was generated without layer records");
  return layer_subgraph_counts(std::span<const LayerRecord>(*g.layer_records));
}

}  // namespace superpose
