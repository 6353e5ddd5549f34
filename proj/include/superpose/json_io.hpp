#pragma once

#include <string>

#include <json.hpp>

#include "superpose/experiments.hpp"
#include "superpose/layer_model.hpp"
#include "superpose/limit_theory.hpp"

namespace superpose {

/// Throws ConfigError "<path>: <reason>".
[[noreturn]] void config_error(const std::string& path, const std::string& reason);

/// Rejects any key of `obj` not in `allowed`.
void reject_unknown_keys(const nlohmann::json& obj, std::initializer_list<const char*> allowed,
                         const std::string& path);

// Typed field readers; each raises ConfigError naming path.key on a missing or
// ill-typed value.
double read_number(const nlohmann::json& obj, const char* key, const std::string& path);
std::uint64_t read_uint(const nlohmann::json& obj, const char* key, const std::string& path);

nlohmann::json to_json(const LayerTypeDistribution& dist);

/// {"family": "constant", "size", "strength"}
/// {"family": "tabular", "atoms": [{"size", "strength", "probability"}, ...]}
/// {"family": "power_law", "alpha", "beta", "b", "x_min", "x_max"}
LayerTypeDistribution layer_distribution_from_json(const nlohmann::json& j,
                                                   const std::string& path = "layer_distribution");

/// Canonical form, including the layer distribution; used for hashing.
nlohmann::json to_json(const StudySpec& spec);
StudySpec study_spec_from_json(const nlohmann::json& study, const LayerTypeDistribution& dist,
                               const std::string& path = "study");

nlohmann::json to_json(const MomentReport& m);
nlohmann::json to_json(const TailPrediction& t);
nlohmann::json to_json(const CrossMoments& p);

}  // namespace superpose
