#include "superpose/cli.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <functional>
#include <sstream>

#include "superpose/empirical_stats.hpp"
#include "superpose/error.hpp"
#include "superpose/json_io.hpp"
#include "superpose/limit_theory.hpp"

namespace superpose::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kToolName = "superpose-net";
constexpr const char* kToolVersion = "1.0.0";

constexpr std::array<std::pair<Command, std::string_view>, 5> kCommands{{
    {Command::generate, "generate"},
    {Command::empirical, "empirical"},
    {Command::theory, "theory"},
    {Command::converge, "converge"},
    {Command::tailfit, "tailfit"},
}};

bool read_bool(const json& obj, const char* key, const std::string& path) {
  const auto& v = obj.at(key);
  if (!v.is_boolean()) config_error(path + "." + key, "expected a boolean");
  return v.get<bool>();
}

std::string read_string(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key)) config_error(path + "." + key, "missing required field");
  const auto& v = obj.at(key);
  if (!v.is_string()) config_error(path + "." + key, "expected a string");
  return v.get<std::string>();
}

ModelSection parse_model(const json& j) {
  const std::string path = "model";
  reject_unknown_keys(j, {"n", "m", "mu", "seed", "keep_layer_records"}, path);
  ModelSection m;
  m.n = read_uint(j, "n", path);
  if (m.n < 2) config_error("model.n", "must be at least 2");
  if (j.contains("m") && j.contains("mu")) config_error("model", "give exactly one of m and mu, not both");
  if (!j.contains("m") && !j.contains("mu")) config_error("model", "one of m and mu is required");
  if (j.contains("m")) {
    m.m = read_uint(j, "m", path);
    if (*m.m < 1) config_error("model.m", "must be at least 1");
  } else {
    m.mu = read_number(j, "mu", path);
    if (!(*m.mu > 0.0)) config_error("model.mu", "must be positive");
  }
  m.seed = read_uint(j, "seed", path);
  if (j.contains("keep_layer_records")) m.keep_layer_records = read_bool(j, "keep_layer_records", path);
  try {
    GenConfig{m.n, m.m, m.mu, m.seed, m.keep_layer_records}.validate();
  } catch (const Error& e) {
    config_error(path, e.what());
  }
  return m;
}

TheorySection parse_theory(const json& j) {
  const std::string path = "theory";
  reject_unknown_keys(j, {"mu", "tail_epsilon", "bidegree"}, path);
  TheorySection t;
  t.mu = read_number(j, "mu", path);
  if (!(t.mu > 0.0)) config_error("theory.mu", "must be positive");
  if (j.contains("tail_epsilon")) t.tail_epsilon = read_number(j, "tail_epsilon", path);
  if (!(t.tail_epsilon > 0.0 && t.tail_epsilon < 1.0)) config_error("theory.tail_epsilon", "must lie in (0,1)");
  if (j.contains("bidegree")) t.bidegree = read_bool(j, "bidegree", path);
  return t;
}

EmpiricalSection parse_empirical(const json& j) {
  const std::string path = "empirical";
  reject_unknown_keys(j, {"edge_list", "n"}, path);
  EmpiricalSection e;
  e.edge_list = read_string(j, "edge_list", path);
  if (j.contains("n")) e.n = read_uint(j, "n", path);
  return e;
}

TailfitSection parse_tailfit(const json& j) {
  const std::string path = "tailfit";
  reject_unknown_keys(j, {"t_lo", "t_hi", "replications"}, path);
  TailfitSection t;
  if (j.contains("t_lo")) t.range.lo = read_uint(j, "t_lo", path);
  if (j.contains("t_hi")) t.range.hi = read_uint(j, "t_hi", path);
  if (t.range.hi < t.range.lo) config_error("tailfit", "t_hi must be >= t_lo");
  if (j.contains("replications")) t.replications = read_uint(j, "replications", path);
  if (t.replications < 1) config_error("tailfit.replications", "must be at least 1");
  return t;
}

OutputSection parse_output(const json& j) {
  const std::string path = "output";
  reject_unknown_keys(j, {"directory", "formats"}, path);
  OutputSection o;
  if (j.contains("directory")) o.directory = read_string(j, "directory", path);
  if (j.contains("formats")) {
    if (!j.at("formats").is_array()) config_error("output.formats", "expected an array");
    o.formats.clear();
    for (const auto& f : j.at("formats")) {
      if (!f.is_string()) config_error("output.formats", "expected strings");
      const auto name = f.get<std::string>();
      if (name != "csv" && name != "json" && name != "edgelist") {
        config_error("output.formats", "unknown format '" + name + "'");
      }
      if (std::find(o.formats.begin(), o.formats.end(), name) == o.formats.end()) o.formats.push_back(name);
    }
  }
  return o;
}

void require(bool present, const char* what, Command c) {
  if (!present) {
    config_error(what, "required for the " + std::string(to_string(c)) + " command");
  }
}

}  // namespace

std::string_view to_string(Command c) {
  for (const auto& [cmd, name] : kCommands) {
    if (cmd == c) return name;
  }
  return "unknown";
}

std::optional<Command> command_from_string(std::string_view name) {
  for (const auto& [cmd, n] : kCommands) {
    if (n == name) return cmd;
  }
  return std::nullopt;
}

bool OutputSection::has(std::string_view f) const {
  return std::find(formats.begin(), formats.end(), f) != formats.end();
}

GenConfig RunConfig::gen_config() const {
  if (!model) throw Error(ErrorKind::config, "model: missing");
  return GenConfig{model->n, model->m, model->mu, model->seed, model->keep_layer_records};
}

RunConfig parse_config(const json& doc) {
  reject_unknown_keys(doc, {"command", "layer_distribution", "model", "theory", "study", "empirical", "tailfit",
                            "output"},
                      "config");
  RunConfig cfg;
  const auto cmd_name = read_string(doc, "command", "config");
  auto cmd = command_from_string(cmd_name);
  if (!cmd) config_error("config.command", "unknown command '" + cmd_name + "'");
  cfg.command = *cmd;

  if (doc.contains("layer_distribution")) cfg.layer_distribution = layer_distribution_from_json(doc.at("layer_distribution"));
  if (doc.contains("model")) cfg.model = parse_model(doc.at("model"));
  if (doc.contains("theory")) cfg.theory = parse_theory(doc.at("theory"));
  if (doc.contains("empirical")) cfg.empirical = parse_empirical(doc.at("empirical"));
  if (doc.contains("tailfit")) cfg.tailfit = parse_tailfit(doc.at("tailfit"));
  if (doc.contains("study")) {
    if (!cfg.layer_distribution) config_error("layer_distribution", "required by the study section");
    cfg.study = study_spec_from_json(doc.at("study"), *cfg.layer_distribution);
  }
  if (doc.contains("output")) cfg.output = parse_output(doc.at("output"));

  switch (cfg.command) {
    case Command::generate:
      require(cfg.layer_distribution.has_value(), "layer_distribution", cfg.command);
      require(cfg.model.has_value(), "model", cfg.command);
      break;
    case Command::empirical:
      require(cfg.empirical.has_value(), "empirical", cfg.command);
      break;
    case Command::theory:
      require(cfg.layer_distribution.has_value(), "layer_distribution", cfg.command);
      require(cfg.theory.has_value(), "theory", cfg.command);
      break;
    case Command::converge:
      require(cfg.study.has_value(), "study", cfg.command);
      break;
    case Command::tailfit:
      require(cfg.layer_distribution.has_value(), "layer_distribution", cfg.command);
      require(cfg.model.has_value(), "model", cfg.command);
      if (!cfg.model->mu) config_error("model.mu", "tailfit compares against the mu limit; give mu, not m");
      if (!cfg.tailfit) cfg.tailfit = TailfitSection{};
      break;
  }
  return cfg;
}

RunConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    config_error("config", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

RunConfig parse_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

json to_json(const RunConfig& cfg) {
  json doc = {{"command", std::string(to_string(cfg.command))}};
  if (cfg.layer_distribution) doc["layer_distribution"] = superpose::to_json(*cfg.layer_distribution);
  if (cfg.model) {
    json m = {{"n", cfg.model->n}, {"seed", cfg.model->seed}, {"keep_layer_records", cfg.model->keep_layer_records}};
    if (cfg.model->m) m["m"] = *cfg.model->m;
    if (cfg.model->mu) m["mu"] = *cfg.model->mu;
    doc["model"] = m;
  }
  if (cfg.theory) {
    doc["theory"] = {{"mu", cfg.theory->mu}, {"tail_epsilon", cfg.theory->tail_epsilon}, {"bidegree", cfg.theory->bidegree}};
  }
  if (cfg.study) {
    json s = superpose::to_json(*cfg.study);
    s.erase("layer_distribution");
    doc["study"] = s;
  }
  if (cfg.empirical) {
    json e = {{"edge_list", cfg.empirical->edge_list}};
    if (cfg.empirical->n) e["n"] = *cfg.empirical->n;
    doc["empirical"] = e;
  }
  if (cfg.tailfit) {
    doc["tailfit"] = {{"t_lo", cfg.tailfit->range.lo},
                      {"t_hi", cfg.tailfit->range.hi},
                      {"replications", cfg.tailfit->replications}};
  }
  doc["output"] = {{"directory", cfg.output.directory}, {"formats", cfg.output.formats}};
  return doc;
}

void write_edge_list(std::ostream& out, const GraphSample& g, std::uint64_t m, std::uint64_t seed) {
  out << "# " << kToolName << " n=" << g.n << " m=" << m << " seed=" << seed << '\n';
  for (const auto& e : g.edges) out << e.u << ' ' << e.v << '\n';
}

GraphSample read_edge_list(std::istream& in, std::optional<std::uint64_t> n_override) {
  GraphSample g;
  std::optional<std::uint64_t> header_n;
  std::uint64_t max_label = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::istringstream tokens(line.substr(1));
      std::string tok;
      while (tokens >> tok) {
        if (tok.rfind("n=", 0) == 0) header_n = std::stoull(tok.substr(2));
      }
      continue;
    }
    std::istringstream fields(line);
    long long a = 0;
    long long b = 0;
    if (!(fields >> a >> b) || a < 1 || b < 1) {
      throw Error(ErrorKind::io, "edge list line " + std::to_string(line_no) + ": expected two positive labels");
    }
    if (a == b) throw Error(ErrorKind::io, "edge list line " + std::to_string(line_no) + ": self-loop");
    const auto u = static_cast<NodeId>(std::min(a, b));
    const auto v = static_cast<NodeId>(std::max(a, b));
    g.edges.push_back({u, v});
    max_label = std::max<std::uint64_t>(max_label, v);
  }
  g.n = n_override.value_or(header_n.value_or(max_label));
  if (max_label > g.n) throw Error(ErrorKind::io, "edge list label exceeds the declared node count");
  if (g.n < 1) throw Error(ErrorKind::io, "edge list declares no nodes");
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  return g;
}

void apply_overrides(RunConfig& config, const RunOptions& options) {
  if (options.out_dir) config.output.directory = *options.out_dir;
  if (options.seed) {
    if (config.model) config.model->seed = *options.seed;
    if (config.study) config.study->seed = *options.seed;
  }
}

int exit_code_for(ErrorKind kind) {
  if (kind == ErrorKind::config || kind == ErrorKind::invalid_argument) return 1;
  if (kind == ErrorKind::hypothesis_violation) return 3;
  if (kind == ErrorKind::io) return 4;
  return 2;
}

namespace {

class OutputWriter {
 public:
  explicit OutputWriter(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw Error(ErrorKind::io, "cannot create output directory " + dir_.string() + ": " + ec.message());
  }

  template <typename Fn>
  void write(const std::string& name, Fn&& fill) {
    const fs::path path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
    fill(out);
    out.flush();
    if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
    files_.push_back(name);
  }

  void write_json(const std::string& name, const json& j) {
    write(name, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
  }

  const std::vector<std::string>& files() const { return files_; }
  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

json optional_stat(const std::function<double()>& compute) {
  try {
    return compute();
  } catch (const Error& e) {
    if (!is_degenerate(e.kind())) throw;
    return {{"error", std::string(to_string(e.kind()))}, {"message", e.what()}};
  }
}

json correlations_json(const Pmf2D& f) {
  return {{"assortativity", optional_stat([&] { return pearson_correlation(f); })},
          {"kendall", optional_stat([&] { return kendall(f); })},
          {"spearman", optional_stat([&] { return spearman(f); })}};
}

void run_generate(const RunConfig& cfg, unsigned threads, OutputWriter& out, json& manifest) {
  const GenConfig gen = cfg.gen_config();
  const GraphSample g = generate_graph(gen, *cfg.layer_distribution, threads);
  out.write("edges.txt", [&](std::ostream& os) { write_edge_list(os, g, gen.layer_count(), gen.seed); });
  if (g.layer_records) {
    out.write("layers.jsonl", [&](std::ostream& os) {
      for (const auto& rec : *g.layer_records) {
        json edges = json::array();
        for (const auto& e : rec.edges) edges.push_back({e.u, e.v});
        os << json{{"size", rec.type.size}, {"strength", rec.type.strength}, {"nodes", rec.nodes}, {"edges", edges}}
                  .dump()
           << '\n';
      }
    });
  }
  if (cfg.output.has("csv")) {
    out.write("degree_pmf.csv", [&](std::ostream& os) { write_csv(os, degree_distribution(g)); });
  }
  json summary = {{"n", g.n}, {"m", gen.layer_count()}, {"edges", g.edges.size()}};
  if (cfg.output.has("json")) out.write_json("summary.json", summary);
  manifest["mass_defects"] = {{"degree", 0.0}};
  manifest["result"] = summary;
}

void run_empirical(const RunConfig& cfg, OutputWriter& out, json& manifest) {
  std::ifstream in(cfg.empirical->edge_list);
  if (!in) throw Error(ErrorKind::io, "cannot read edge list " + cfg.empirical->edge_list);
  const GraphSample g = read_edge_list(in, cfg.empirical->n);
  const Pmf1D degree = degree_distribution(g);
  json summary = {{"n", g.n}, {"edges", g.edges.size()}, {"mean_degree", degree.mean()}};
  if (g.edges.empty()) {
    summary["bidegree"] = {{"error", "EmptyGraph"}, {"message", "graph has no edges"}};
  } else {
    const Pmf2D bidegree = bidegree_distribution(g);
    summary.update(correlations_json(bidegree));
    if (cfg.output.has("csv")) {
      out.write("bidegree_pmf.csv", [&](std::ostream& os) { write_csv(os, bidegree); });
      out.write("size_biased_pmf.csv", [&](std::ostream& os) { write_csv(os, size_biased(degree)); });
    }
  }
  if (cfg.output.has("csv")) out.write("degree_pmf.csv", [&](std::ostream& os) { write_csv(os, degree); });
  out.write_json("summary.json", summary);
  manifest["mass_defects"] = {{"degree", 0.0}, {"bidegree", 0.0}};
  manifest["result"] = summary;
}

void run_theory(const RunConfig& cfg, OutputWriter& out, json& manifest) {
  const LimitParams params{cfg.theory->mu, *cfg.layer_distribution, cfg.theory->tail_epsilon};
  const Pmf1D increment = increment_pmf(params);
  const Pmf1D degree = limiting_degree_pmf(params);
  json summary = {{"mu", params.mu},
                  {"tail_epsilon", params.tail_epsilon},
                  {"cross_moments", superpose::to_json(cross_moments(params.dist))},
                  {"lambda", params.mu * cross_moment(params.dist, 1, 0)}};
  json defects = {{"degree", degree.mass_defect}};
  summary["assortativity"] = optional_stat([&] { return limiting_assortativity(params); });
  try {
    summary["moments"] = superpose::to_json(limiting_moments(params));
  } catch (const Error& e) {
    if (!is_degenerate(e.kind())) throw;
    summary["moments"] = {{"error", std::string(to_string(e.kind()))}, {"message", e.what()}};
  }
  if (cfg.output.has("csv")) {
    out.write("increment_pmf.csv", [&](std::ostream& os) { write_csv(os, increment); });
    out.write("degree_pmf.csv", [&](std::ostream& os) { write_csv(os, degree); });
  }
  if (cfg.theory->bidegree && cross_moment(params.dist, 2, 1) > 0.0) {
    const Pmf2D prime = fprime2_pmf(params);
    const Pmf2D bidegree = limiting_bidegree_pmf(params);
    defects["bidegree"] = bidegree.mass_defect;
    summary["rank_correlations"] = {{"kendall", optional_stat([&] { return kendall(bidegree); })},
                                    {"spearman", optional_stat([&] { return spearman(bidegree); })},
                                    {"mass_defect", bidegree.mass_defect}};
    summary["bidegree_pearson"] = optional_stat([&] { return pearson_correlation(bidegree); });
    if (cfg.output.has("csv")) {
      out.write("fprime2_pmf.csv", [&](std::ostream& os) { write_csv(os, prime); });
      out.write("bidegree_pmf.csv", [&](std::ostream& os) { write_csv(os, bidegree); });
    }
  }
  if (const auto& pl = params.dist.power_law_params()) {
    try {
      summary["tail_prediction"] = superpose::to_json(tail_prediction(pl->alpha, pl->beta, pl->b, params.mu, params.dist));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::hypothesis_violation) throw;
      summary["tail_prediction"] = {{"error", std::string(to_string(e.kind()))}, {"message", e.what()}};
    }
  }
  out.write_json("summary.json", summary);
  manifest["mass_defects"] = defects;
  manifest["result"] = summary;
}

void run_converge(const RunConfig& cfg, unsigned threads, OutputWriter& out, json& manifest) {
  const ConvergenceReport report = run_study(*cfg.study, threads);
  const std::string stem = "seed" + std::to_string(cfg.study->seed) + "_" + spec_hash(*cfg.study);
  out.write("report_" + stem + ".csv", [&](std::ostream& os) { write_report_csv(os, report); });
  const json summary = summary_json(report);
  out.write_json("summary_" + stem + ".json", summary);
  json defects = json::object();
  for (const char* key : {"mass_defect_degree", "mass_defect_bidegree"}) {
    if (auto it = report.theory.values.find(key); it != report.theory.values.end()) defects[key] = it->second;
  }
  manifest["mass_defects"] = defects;
  manifest["spec_hash"] = spec_hash(*cfg.study);
}

void run_tailfit(const RunConfig& cfg, unsigned threads, OutputWriter& out, json& manifest) {
  const auto& dist = *cfg.layer_distribution;
  const auto& pl = dist.power_law_params();
  if (!pl) throw Error(ErrorKind::config, "layer_distribution.family: tailfit requires power_law");
  const double mu = *cfg.model->mu;
  const TailPrediction prediction = tail_prediction(pl->alpha, pl->beta, pl->b, mu, dist);

  DegreeCounts pooled;
  for (std::uint64_t rep = 0; rep < cfg.tailfit->replications; ++rep) {
    GenConfig gen = cfg.gen_config();
    gen.keep_layer_records = false;
    gen.seed = derive_key(cfg.model->seed, rep);
    pooled.merge(degree_counts(generate_graph(gen, dist, threads)));
  }
  const SlopeFit fit = tail_slope_fit(pooled, cfg.tailfit->range);
  json summary = {{"prediction", superpose::to_json(prediction)},
                  {"fit",
                   {{"slope", fit.slope},
                    {"std_error", fit.std_error},
                    {"points", fit.points},
                    {"t_lo", cfg.tailfit->range.lo},
                    {"t_hi", cfg.tailfit->range.hi}}},
                  {"slope_minus_exponent", fit.slope - prediction.marginal_exponent}};
  if (cfg.output.has("csv")) {
    out.write("size_biased_pmf.csv", [&](std::ostream& os) { write_csv(os, size_biased(pooled.to_pmf())); });
  }
  out.write_json("summary.json", summary);
  manifest["mass_defects"] = {{"size_biased", 0.0}};
  manifest["result"] = summary;
}

}  // namespace

int dispatch(const RunConfig& config, unsigned threads, std::ostream& err) {
  std::optional<OutputWriter> out;
  try {
    out.emplace(config.output.directory);
    json manifest = {{"tool", kToolName}, {"version", kToolVersion}, {"command", std::string(to_string(config.command))},
                     {"config", to_json(config)}};
    if (config.model) manifest["seed"] = config.model->seed;
    if (config.study) manifest["seed"] = config.study->seed;
    switch (config.command) {
      case Command::generate: run_generate(config, threads, *out, manifest); break;
      case Command::empirical: run_empirical(config, *out, manifest); break;
      case Command::theory: run_theory(config, *out, manifest); break;
      case Command::converge: run_converge(config, threads, *out, manifest); break;
      case Command::tailfit: run_tailfit(config, threads, *out, manifest); break;
    }
    manifest["outputs"] = out->files();
    out->write_json("manifest.json", manifest);
    return 0;
  } catch (const Error& e) {
    const int code = exit_code_for(e.kind());
    const json body = {{"error", std::string(to_string(e.kind()))}, {"message", e.what()}, {"exit_code", code}};
    err << body.dump() << '\n';
    if (out) {
      std::ofstream f(out->dir() / "error.json");
      if (f) f << body.dump(2) << '\n';
    }
    return code;
  }
}

}  // namespace superpose::cli
