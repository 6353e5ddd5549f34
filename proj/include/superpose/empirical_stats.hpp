#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "superpose/graph_gen.hpp"
#include "superpose/pmf.hpp"

namespace superpose {

/// counts[s] = number of nodes of degree s. Additive across samples.
struct DegreeCounts {
  std::vector<std::uint64_t> counts;

  std::uint64_t nodes() const;
  void merge(const DegreeCounts& other);
  Pmf1D to_pmf() const;
};

/// Counts of directed adjacent pairs (i, j) by (deg i, deg j) on a square grid.
/// Additive across samples, which is how replications are pooled.
struct BidegreeCounts {
  std::size_t dim = 0;
  std::vector<std::uint64_t> counts;  // dim x dim, row-major

  std::uint64_t pairs() const;
  void merge(const BidegreeCounts& other);
  Pmf2D to_pmf() const;
};

DegreeCounts degree_counts(const GraphSample& g);
BidegreeCounts bidegree_counts(const GraphSample& g);

Pmf1D degree_distribution(const GraphSample& g);

/// Throws EmptyGraph when g has no edges.
Pmf2D bidegree_distribution(const GraphSample& g);

/// f*(s) proportional to s f(s). Throws ZeroMean when f has no mass above 0.
Pmf1D size_biased(const Pmf1D& f);

// Correlation functionals of a bivariate pmf. Each throws DegenerateMarginal
// when a marginal is a point mass. Mass defects are ignored; the pmf is
// renormalized over its support.
double pearson_correlation(const Pmf2D& f);
double kendall(const Pmf2D& f);
double spearman(const Pmf2D& f);

/// The same three functionals computed directly from a list of (x, y)
/// observations, each observation weighted equally.
struct SampleCorrelations {
  double pearson = 0.0;
  double kendall = 0.0;
  double spearman = 0.0;
};
SampleCorrelations sample_correlations(std::span<const std::pair<std::uint32_t, std::uint32_t>> obs);

/// (deg i, deg j) over all directed adjacent pairs of g.
std::vector<std::pair<std::uint32_t, std::uint32_t>> directed_degree_pairs(const GraphSample& g);

struct SubgraphMeans {
  double links = 0.0;
  double two_stars = 0.0;
  double three_stars = 0.0;
};

/// Per-layer means of link, 2-star and 3-star counts. Throws MissingRecords
/// when the sample was generated without layer records.
SubgraphMeans layer_subgraph_counts(const GraphSample& g);
SubgraphMeans layer_subgraph_counts(std::span<const LayerRecord> records);

}  // namespace superpose
