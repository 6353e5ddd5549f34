#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <vector>

#include "superpose/layer_model.hpp"
#include "superpose/rng.hpp"

namespace superpose {

using NodeId = std::uint32_t;

/// Undirected edge with 1-based endpoints, u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct GenConfig {
  std::uint64_t n = 0;
  std::optional<std::uint64_t> layers;  // m
  std::optional<double> mu;             // m = round(mu * n)
  std::uint64_t seed = 0;
  bool keep_layer_records = false;

  /// Throws invalid_argument unless n >= 2, exactly one of layers/mu is set and m >= 1.
  void validate() const;
  std::uint64_t layer_count() const;
};

struct LayerRecord {
  LayerType type;            // size already clamped to n
  std::vector<NodeId> nodes;  // sorted
  std::vector<Edge> edges;    // sorted
};

struct GraphSample {
  std::uint64_t n = 0;
  std::vector<Edge> edges;  // sorted, deduplicated
  std::optional<std::vector<LayerRecord>> layer_records;
};

/// Dense edge sampling (a Bernoulli trial per pair) is used above this strength;
/// below it, geometric skips over the pair enumeration.
inline constexpr double kDenseStrengthThreshold = 0.25;

/// Samples one layer: a uniform size-x subset of [1, n] and an independent
/// Bernoulli(strength) trial on each pair inside it. Sizes above n are clamped.
LayerRecord generate_layer(std::uint64_t n, LayerType layer, Stream& stream);

/// Superposition of m independent layers. Layer k draws everything from the
/// stream derived from (seed, k), so the result does not depend on `threads`.
GraphSample generate_graph(const GenConfig& config, const LayerTypeDistribution& dist,
                           unsigned threads = 1);

/// degrees[i - 1] = degree of node i.
std::vector<std::uint32_t> degrees(const GraphSample& g);

}  // namespace superpose
