#include "superpose/layer_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "superpose/error.hpp"
#include "superpose/numeric.hpp"

namespace superpose {
namespace {

constexpr double kProbabilityTolerance = 1e-12;

void check_type(const LayerType& t) {
  if (!(t.strength >= 0.0 && t.strength <= 1.0)) {
    throw Error(ErrorKind::invalid_argument,
                "layer strength must lie in [0,1], got " + std::to_string(t.strength));
  }
}

std::vector<LayerAtom> merge_atoms(std::vector<LayerAtom> atoms) {
  if (atoms.empty()) throw Error(ErrorKind::invalid_argument, "tabular distribution has no atoms");
  CompensatedSum total;
  for (const auto& a : atoms) {
    check_type(a.type);
    if (!(a.probability >= 0.0)) {
      throw Error(ErrorKind::invalid_argument, "atom probability must be nonnegative");
    }
    total += a.probability;
  }
  if (std::fabs(total.value() - 1.0) > kProbabilityTolerance) {
    throw Error(ErrorKind::invalid_argument,
                "atom probabilities must sum to 1, got " + std::to_string(total.value()));
  }
  std::sort(atoms.begin(), atoms.end(), [](const LayerAtom& a, const LayerAtom& b) {
    if (a.type.size != b.type.size) return a.type.size < b.type.size;
    return a.type.strength < b.type.strength;
  });
  std::vector<LayerAtom> merged;
  for (const auto& a : atoms) {
    if (!merged.empty() && merged.back().type == a.type) {
      merged.back().probability += a.probability;
    } else {
      merged.push_back(a);
    }
  }
  return merged;
}

}  // namespace

LayerTypeDistribution::LayerTypeDistribution(LayerFamily family, std::vector<LayerAtom> atoms,
                                             std::optional<PowerLawParams> power_law)
    : family_(family), atoms_(std::move(atoms)), power_law_(power_law) {
  cumulative_.reserve(atoms_.size());
  CompensatedSum running;
  for (const auto& a : atoms_) {
    running += a.probability;
    cumulative_.push_back(running.value());
  }
}

LayerTypeDistribution LayerTypeDistribution::tabular(std::vector<LayerAtom> atoms) {
  return {LayerFamily::tabular, merge_atoms(std::move(atoms)), std::nullopt};
}

LayerTypeDistribution LayerTypeDistribution::constant(std::uint64_t size, double strength) {
  const LayerType t{size, strength};
  check_type(t);
  return {LayerFamily::constant, {LayerAtom{t, 1.0}}, std::nullopt};
}

LayerTypeDistribution LayerTypeDistribution::power_law(const PowerLawParams& p) {
  if (!(p.alpha > 2.0)) throw Error(ErrorKind::invalid_argument, "power_law requires alpha > 2");
  if (!(p.beta >= 0.0 && p.beta < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "power_law requires beta in [0,1)");
  }
  if (!(p.b > 0.0)) throw Error(ErrorKind::invalid_argument, "power_law requires b > 0");
  if (p.x_min < 1) throw Error(ErrorKind::invalid_argument, "power_law requires x_min >= 1");
  if (p.x_max < p.x_min) throw Error(ErrorKind::invalid_argument, "power_law requires x_max >= x_min");

  std::vector<LayerAtom> atoms;
  atoms.reserve(p.x_max - p.x_min + 1);
  CompensatedSum norm;
  for (std::uint64_t x = p.x_min; x <= p.x_max; ++x) {
    const double xd = static_cast<double>(x);
    const double w = std::pow(xd, -p.alpha);
    norm += w;
    atoms.push_back({{x, std::min(1.0, p.b * std::pow(xd, -p.beta))}, w});
  }
  const double z = norm.value();
  for (auto& a : atoms) a.probability /= z;
  return {LayerFamily::power_law, std::move(atoms), p};
}

std::uint64_t LayerTypeDistribution::max_size() const noexcept {
  std::uint64_t m = 0;
  for (const auto& a : atoms_) {
    if (a.probability > 0.0) m = std::max(m, a.type.size);
  }
  return m;
}

LayerType LayerTypeDistribution::sample(Stream& stream) const {
  const double u = stream.uniform() * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  auto idx = static_cast<std::size_t>(it - cumulative_.begin());
  // Skip zero-probability atoms that share a cumulative value with their predecessor.
  while (atoms_[idx].probability == 0.0 && idx + 1 < atoms_.size()) ++idx;
  return atoms_[idx].type;
}

double cross_moment(const LayerTypeDistribution& dist, unsigned r, unsigned s) {
  CompensatedSum acc;
  for (const auto& a : dist.atoms()) {
    const double ff = falling_factorial(a.type.size, r);
    if (ff == 0.0) continue;
    acc += ff * std::pow(a.type.strength, static_cast<double>(s)) * a.probability;
  }
  return acc.value();
}

CrossMoments cross_moments(const LayerTypeDistribution& dist) {
  return {cross_moment(dist, 1, 0), cross_moment(dist, 2, 1), cross_moment(dist, 3, 2),
          cross_moment(dist, 3, 3), cross_moment(dist, 4, 3)};
}

LayerTypeDistribution edge_biased_distribution(const LayerTypeDistribution& dist) {
  const double p21 = cross_moment(dist, 2, 1);
  if (!(p21 > 0.0)) {
    throw Error(ErrorKind::zero_edge_mass, "P21 = 0: layers produce no edges");
  }
  if (dist.family() == LayerFamily::constant) return dist;

  std::vector<LayerAtom> reweighted;
  for (const auto& a : dist.atoms()) {
    const double w = falling_factorial(a.type.size, 2) * a.type.strength * a.probability;
    if (w > 0.0) reweighted.push_back({a.type, w / p21});
  }
  // Renormalize to absorb rounding in the weights; the sum is 1 up to a few ulps.
  CompensatedSum total;
  for (const auto& a : reweighted) total += a.probability;
  for (auto& a : reweighted) a.probability /= total.value();
  return LayerTypeDistribution::tabular(std::move(reweighted));
}

double power_law_constant(const LayerTypeDistribution& dist) {
  const auto& params = dist.power_law_params();
  if (!params) {
    throw Error(ErrorKind::invalid_argument, "power-law constant requires the power_law family");
  }
  const auto& last = dist.atoms().back();
  return last.probability * std::pow(static_cast<double>(last.type.size), params->alpha);
}

}  // namespace superpose
