#include "superpose/graph_gen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_set>

#include "superpose/error.hpp"
#include "superpose/parallel.hpp"

namespace superpose {
namespace {

// Uniform random subset of [1, n] of the given size, returned sorted.
std::vector<NodeId> sample_subset(std::uint64_t n, std::uint64_t size, Stream& stream) {
  std::vector<NodeId> nodes;
  nodes.reserve(size);
  if (size == 0) return nodes;
  if (size > n / 64) {
    // Partial Fisher-Yates over the full label range.
    std::vector<NodeId> labels(n);
    std::iota(labels.begin(), labels.end(), NodeId{1});
    for (std::uint64_t i = 0; i < size; ++i) {
      const std::uint64_t j = i + stream.below(n - i);
      std::swap(labels[i], labels[j]);
    }
    nodes.assign(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(size));
  } else {
    std::unordered_set<NodeId> seen;
    seen.reserve(size * 2);
    while (nodes.size() < size) {
      const auto candidate = static_cast<NodeId>(stream.below(n) + 1);
      if (seen.insert(candidate).second) nodes.push_back(candidate);
    }
  }
  std::sort(nodes.begin(), nodes.end());
  return nodes;
}

Edge make_edge(NodeId a, NodeId b) { return a < b ? Edge{a, b} : Edge{b, a}; }

// Pair index k <-> (i, j) with i < j in colexicographic order: k = j(j-1)/2 + i.
std::pair<std::uint64_t, std::uint64_t> decode_pair(std::uint64_t k) {
  auto j = static_cast<std::uint64_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(k))) / 2.0);
  while (j * (j - 1) / 2 > k) --j;
  while ((j + 1) * j / 2 <= k) ++j;
  return {k - j * (j - 1) / 2, j};
}

}  // namespace

void GenConfig::validate() const {
  if (n < 2) throw Error(ErrorKind::invalid_argument, "n must be at least 2");
  if (n > std::numeric_limits<NodeId>::max()) {
    throw Error(ErrorKind::invalid_argument, "n exceeds the 32-bit node id range");
  }
  if (layers.has_value() == mu.has_value()) {
    throw Error(ErrorKind::invalid_argument, "exactly one of layers (m) and mu must be given");
  }
  if (mu && !(*mu > 0.0)) throw Error(ErrorKind::invalid_argument, "mu must be positive");
  if (layer_count() < 1) throw Error(ErrorKind::invalid_argument, "derived layer count m must be >= 1");
}

std::uint64_t GenConfig::layer_count() const {
  if (layers) return *layers;
  if (mu) return static_cast<std::uint64_t>(std::llround(*mu * static_cast<double>(n)));
  return 0;
}

LayerRecord generate_layer(std::uint64_t n, LayerType layer, Stream& stream) {
  layer.size = std::min(layer.size, n);
  LayerRecord rec{layer, sample_subset(n, layer.size, stream), {}};
  const std::uint64_t x = layer.size;
  const double y = layer.strength;
  if (x < 2 || y <= 0.0) return rec;

  const std::uint64_t pairs = x * (x - 1) / 2;
  if (y > kDenseStrengthThreshold) {
    rec.edges.reserve(static_cast<std::size_t>(static_cast<double>(pairs) * y * 1.1) + 4);
    for (std::uint64_t j = 1; j < x; ++j) {
      for (std::uint64_t i = 0; i < j; ++i) {
        if (y >= 1.0 || stream.bernoulli(y)) rec.edges.push_back(make_edge(rec.nodes[i], rec.nodes[j]));
      }
    }
  } else {
    const double log_q = std::log1p(-y);
    std::uint64_t k = stream.geometric_skip(log_q);
    while (k < pairs) {
      const auto [i, j] = decode_pair(k);
      rec.edges.push_back(make_edge(rec.nodes[i], rec.nodes[j]));
      const std::uint64_t skip = stream.geometric_skip(log_q);
      if (skip >= pairs) break;
      k += skip + 1;
    }
  }
  std::sort(rec.edges.begin(), rec.edges.end());
  return rec;
}

GraphSample generate_graph(const GenConfig& config, const LayerTypeDistribution& dist,
                           unsigned threads) {
  config.validate();
  const std::uint64_t m = config.layer_count();
  const std::size_t blocks = block_count(m, threads);
  std::vector<std::vector<Edge>> block_edges(blocks);
  std::vector<std::vector<LayerRecord>> block_records(blocks);

  parallel_blocks(m, threads, [&](std::size_t begin, std::size_t end, std::size_t b) {
    auto& edges = block_edges[b];
    for (std::size_t k = begin; k < end; ++k) {
      Stream stream(config.seed, k);
      const LayerType type = dist.sample(stream);
      LayerRecord rec = generate_layer(config.n, type, stream);
      edges.insert(edges.end(), rec.edges.begin(), rec.edges.end());
      if (config.keep_layer_records) block_records[b].push_back(std::move(rec));
    }
  });

  GraphSample g;
  g.n = config.n;
  std::size_t total = 0;
  for (const auto& e : block_edges) total += e.size();
  g.edges.reserve(total);
  for (auto& e : block_edges) {
    g.edges.insert(g.edges.end(), e.begin(), e.end());
    std::vector<Edge>().swap(e);
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());

  if (config.keep_layer_records) {
    std::vector<LayerRecord> records;
    records.reserve(m);
    for (auto& br : block_records) {
      for (auto& r : br) records.push_back(std::move(r));
    }
    g.layer_records = std::move(records);
  }
  return g;
}

std::vector<std::uint32_t> degrees(const GraphSample& g) {
  std::vector<std::uint32_t> deg(g.n, 0);
  for (const auto& e : g.edges) {
    ++deg[e.u - 1];
    ++deg[e.v - 1];
  }
  return deg;
}

}  // namespace superpose
