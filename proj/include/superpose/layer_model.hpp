#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "superpose/rng.hpp"

namespace superpose {

/// Size (node count) and strength (link probability) of one layer.
struct LayerType {
  std::uint64_t size = 0;
  double strength = 0.0;

  friend bool operator==(const LayerType&, const LayerType&) = default;
};

struct LayerAtom {
  LayerType type;
  double probability = 0.0;

  friend bool operator==(const LayerAtom&, const LayerAtom&) = default;
};

enum class LayerFamily { tabular, constant, power_law };

/// Sizes on [x_min, x_max] with pmf proportional to x^-alpha and strength
/// q(x) = min(1, b x^-beta).
struct PowerLawParams {
  double alpha = 3.0;
  double beta = 0.5;
  double b = 1.0;
  std::uint64_t x_min = 1;
  std::uint64_t x_max = 1000;

  friend bool operator==(const PowerLawParams&, const PowerLawParams&) = default;
};

/// Joint law of layer size and strength, always held as a finite list of atoms
/// sorted by (size, strength). Immutable after construction.
class LayerTypeDistribution {
 public:
  static LayerTypeDistribution tabular(std::vector<LayerAtom> atoms);
  static LayerTypeDistribution constant(std::uint64_t size, double strength);
  static LayerTypeDistribution power_law(const PowerLawParams& params);

  LayerFamily family() const noexcept { return family_; }
  std::span<const LayerAtom> atoms() const noexcept { return atoms_; }
  const std::optional<PowerLawParams>& power_law_params() const noexcept { return power_law_; }

  std::uint64_t max_size() const noexcept;

  /// Inverse-CDF draw; consumes exactly one uniform from the stream.
  LayerType sample(Stream& stream) const;

  friend bool operator==(const LayerTypeDistribution& a, const LayerTypeDistribution& b) {
    return a.family_ == b.family_ && a.atoms_ == b.atoms_ && a.power_law_ == b.power_law_;
  }

 private:
  LayerTypeDistribution(LayerFamily family, std::vector<LayerAtom> atoms,
                        std::optional<PowerLawParams> power_law);

  LayerFamily family_;
  std::vector<LayerAtom> atoms_;
  std::vector<double> cumulative_;
  std::optional<PowerLawParams> power_law_;
};

/// P_rs = E[(X)_r Y^s].
struct CrossMoments {
  double p10 = 0.0;
  double p21 = 0.0;
  double p32 = 0.0;
  double p33 = 0.0;
  double p43 = 0.0;
};

double cross_moment(const LayerTypeDistribution& dist, unsigned r, unsigned s);
CrossMoments cross_moments(const LayerTypeDistribution& dist);

/// Law of the type of the layer that produced a given edge: atoms reweighted by
/// (x)_2 y / P_21. Throws ZeroEdgeMass when P_21 = 0.
LayerTypeDistribution edge_biased_distribution(const LayerTypeDistribution& dist);

/// Constant a in p(x) ~ a x^-alpha, read off the concrete truncated law as
/// pmf(x_max) * x_max^alpha. Only defined for the power_law family.
double power_law_constant(const LayerTypeDistribution& dist);

}  // namespace superpose
