#include "superpose/json_io.hpp"

#include <algorithm>

#include "superpose/error.hpp"

namespace superpose {

using nlohmann::json;

void config_error(const std::string& path, const std::string& reason) {
  throw Error(ErrorKind::config, path + ": " + reason);
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& path) {
  if (!obj.is_object()) config_error(path, "expected an object");
  for (const auto& item : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known) config_error(path + "." + item.key(), "unknown key");
  }
}

double read_number(const json& obj, const char* key, const std::string& path) {
  const std::string field = path + "." + key;
  if (!obj.contains(key)) config_error(field, "missing required field");
  const auto& v = obj.at(key);
  if (!v.is_number()) config_error(field, "expected a number");
  return v.get<double>();
}

std::uint64_t read_uint(const json& obj, const char* key, const std::string& path) {
  const std::string field = path + "." + key;
  if (!obj.contains(key)) config_error(field, "missing required field");
  const auto& v = obj.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d >= 0.0 && d == static_cast<double>(static_cast<std::uint64_t>(d))) return static_cast<std::uint64_t>(d);
  }
  config_error(field, "expected a nonnegative integer");
}

namespace {

double read_strength(const json& obj, const std::string& path) {
  const double y = read_number(obj, "strength", path);
  if (!(y >= 0.0 && y <= 1.0)) config_error(path + ".strength", "must lie in [0,1]");
  return y;
}

}  // namespace

json to_json(const LayerTypeDistribution& dist) {
  switch (dist.family()) {
    case LayerFamily::constant: {
      const auto& t = dist.atoms().front().type;
      return {{"family", "constant"}, {"size", t.size}, {"strength", t.strength}};
    }
    case LayerFamily::tabular: {
      json atoms = json::array();
      for (const auto& a : dist.atoms()) {
        atoms.push_back({{"size", a.type.size}, {"strength", a.type.strength}, {"probability", a.probability}});
      }
      return {{"family", "tabular"}, {"atoms", atoms}};
    }
    case LayerFamily::power_law: {
      const auto& p = *dist.power_law_params();
      return {{"family", "power_law"}, {"alpha", p.alpha}, {"beta", p.beta}, {"b", p.b},
              {"x_min", p.x_min},       {"x_max", p.x_max}};
    }
  }
  return {};
}

LayerTypeDistribution layer_distribution_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) config_error(path, "expected an object");
  if (!j.contains("family") || !j.at("family").is_string()) {
    config_error(path + ".family", "missing or not a string");
  }
  const auto family = j.at("family").get<std::string>();
  try {
    if (family == "constant") {
      reject_unknown_keys(j, {"family", "size", "strength"}, path);
      return LayerTypeDistribution::constant(read_uint(j, "size", path), read_strength(j, path));
    }
    if (family == "tabular") {
      reject_unknown_keys(j, {"family", "atoms"}, path);
      if (!j.contains("atoms") || !j.at("atoms").is_array()) config_error(path + ".atoms", "expected an array");
      std::vector<LayerAtom> atoms;
      std::size_t i = 0;
      for (const auto& a : j.at("atoms")) {
        const std::string at = path + ".atoms[" + std::to_string(i++) + "]";
        reject_unknown_keys(a, {"size", "strength", "probability"}, at);
        const double p = read_number(a, "probability", at);
        if (!(p >= 0.0)) config_error(at + ".probability", "must be nonnegative");
        atoms.push_back({{read_uint(a, "size", at), read_strength(a, at)}, p});
      }
      return LayerTypeDistribution::tabular(std::move(atoms));
    }
    if (family == "power_law") {
      reject_unknown_keys(j, {"family", "alpha", "beta", "b", "x_min", "x_max"}, path);
      PowerLawParams p;
      p.alpha = read_number(j, "alpha", path);
      p.beta = read_number(j, "beta", path);
      p.b = read_number(j, "b", path);
      p.x_min = read_uint(j, "x_min", path);
      p.x_max = read_uint(j, "x_max", path);
      return LayerTypeDistribution::power_law(p);
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::config) throw;
    config_error(path, e.what());
  }
  config_error(path + ".family", "unknown family '" + family + "'");
}

json to_json(const StudySpec& spec) {
  json metrics = json::array();
  for (auto m : spec.metrics) metrics.push_back(std::string(to_string(m)));
  json j = {{"layer_distribution", to_json(spec.dist)},
            {"mu", spec.mu},
            {"n_grid", spec.n_grid},
            {"replications", spec.replications},
            {"seed", spec.seed},
            {"metrics", metrics},
            {"tail_epsilon", spec.tail_epsilon}};
  if (spec.fit_range) j["fit_range"] = {spec.fit_range->lo, spec.fit_range->hi};
  return j;
}

StudySpec study_spec_from_json(const json& study, const LayerTypeDistribution& dist, const std::string& path) {
  reject_unknown_keys(study, {"mu", "n_grid", "replications", "seed", "metrics", "fit_range", "tail_epsilon"}, path);
  StudySpec spec;
  spec.dist = dist;
  spec.mu = read_number(study, "mu", path);
  spec.replications = read_uint(study, "replications", path);
  spec.seed = read_uint(study, "seed", path);
  if (!study.contains("n_grid") || !study.at("n_grid").is_array()) config_error(path + ".n_grid", "expected an array");
  for (std::size_t i = 0; i < study.at("n_grid").size(); ++i) {
    const auto& v = study.at("n_grid").at(i);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 2) {
      config_error(path + ".n_grid[" + std::to_string(i) + "]", "expected an integer >= 2");
    }
    spec.n_grid.push_back(v.get<std::uint64_t>());
  }
  if (study.contains("metrics")) {
    if (!study.at("metrics").is_array()) config_error(path + ".metrics", "expected an array");
    for (const auto& m : study.at("metrics")) {
      auto parsed = m.is_string() ? metric_from_string(m.get<std::string>()) : std::nullopt;
      if (!parsed) config_error(path + ".metrics", "unknown metric " + m.dump());
      spec.metrics.push_back(*parsed);
    }
  } else {
    spec.metrics = {Metric::tv1, Metric::tv2, Metric::assortativity, Metric::kendall, Metric::spearman};
  }
  if (study.contains("fit_range")) {
    const auto& r = study.at("fit_range");
    if (!r.is_array() || r.size() != 2 || !r[0].is_number_unsigned() || !r[1].is_number_unsigned()) {
      config_error(path + ".fit_range", "expected [t_lo, t_hi]");
    }
    spec.fit_range = FitRange{r[0].get<std::uint64_t>(), r[1].get<std::uint64_t>()};
  }
  if (study.contains("tail_epsilon")) spec.tail_epsilon = read_number(study, "tail_epsilon", path);
  try {
    spec.validate();
  } catch (const Error& e) {
    config_error(path, e.what());
  }
  return spec;
}

json to_json(const MomentReport& m) {
  return {{"lambda", m.lambda},
          {"increment_mean", m.increment_mean},
          {"increment_second_moment", m.increment_second},
          {"increment_third_moment", m.increment_third},
          {"degree_mean", m.degree_mean},
          {"degree_variance", m.degree_variance},
          {"degree_third_moment", m.degree_third},
          {"prime_mean", m.prime_mean},
          {"prime_second_moment", m.prime_second},
          {"prime_variance", m.prime_variance},
          {"prime_covariance", m.prime_covariance}};
}

json to_json(const TailPrediction& t) {
  return {{"marginal_exponent", t.marginal_exponent},
          {"c_prime", t.c_prime},
          {"c_double_prime", t.c_double_prime},
          {"a", t.a},
          {"p21", t.p21}};
}

json to_json(const CrossMoments& p) {
  return {{"p10", p.p10}, {"p21", p.p21}, {"p32", p.p32}, {"p33", p.p33}, {"p43", p.p43}};
}

}  // namespace superpose
