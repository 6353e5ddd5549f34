#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "superpose/cli.hpp"
#include "superpose/pmf.hpp"
#include "test_support.hpp"

using namespace superpose;
using namespace superpose::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("superpose_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

json minimal_generate() {
  return json::parse(R"({
    "command": "generate",
    "layer_distribution": {"family": "constant", "size": 3, "strength": 0.5},
    "model": {"n": 100, "mu": 1, "seed": 7}
  })");
}

std::string config_error_message(const json& doc) {
  try {
    parse_config(doc);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::config);
    return e.what();
  }
  ADD_FAILURE() << "expected ConfigError";
  return {};
}

int run(const json& doc, const fs::path& out, unsigned threads = 1) {
  RunConfig cfg = parse_config(doc);
  apply_overrides(cfg, RunOptions{threads, out.string(), std::nullopt});
  std::ostringstream err;
  return dispatch(cfg, threads, err);
}

}  // namespace

TEST(ParseConfig, MinimalGenerate) {
  const RunConfig cfg = parse_config(minimal_generate());
  EXPECT_EQ(cfg.command, Command::generate);
  EXPECT_EQ(cfg.gen_config().layer_count(), 100u);
  EXPECT_EQ(*cfg.layer_distribution, LayerTypeDistribution::constant(3, 0.5));
  EXPECT_EQ(cfg.output.formats, std::vector<std::string>{"csv"});
  EXPECT_EQ(cfg.output.directory, "out");
}

TEST(ParseConfig, StrengthOutOfRange) {
  json doc = minimal_generate();
  doc["layer_distribution"]["strength"] = 1.5;
  EXPECT_NE(config_error_message(doc).find("layer_distribution.strength"), std::string::npos);
}

TEST(ParseConfig, BothLayerCountAndRatio) {
  json doc = minimal_generate();
  doc["model"]["m"] = 50;
  const std::string msg = config_error_message(doc);
  EXPECT_NE(msg.find("m"), std::string::npos);
  EXPECT_NE(msg.find("mu"), std::string::npos);
  EXPECT_NE(msg.find("model"), std::string::npos);
}

TEST(ParseConfig, UnknownKeysRejectedAtEveryLevel) {
  json a = minimal_generate();
  a["colour"] = "blue";
  EXPECT_NE(config_error_message(a).find("colour"), std::string::npos);
  json b = minimal_generate();
  b["model"]["nodes"] = 5;
  EXPECT_NE(config_error_message(b).find("model"), std::string::npos);
  json c = minimal_generate();
  c["layer_distribution"]["alpha"] = 3;
  EXPECT_NE(config_error_message(c).find("layer_distribution"), std::string::npos);
}

TEST(ParseConfig, MissingSectionsPerCommand) {
  json a = minimal_generate();
  a.erase("model");
  EXPECT_NE(config_error_message(a).find("model"), std::string::npos);
  EXPECT_NE(config_error_message(json{{"command", "theory"}}).find("layer_distribution"), std::string::npos);
  EXPECT_NE(config_error_message(json{{"command", "empirical"}}).find("empirical"), std::string::npos);
  EXPECT_NE(config_error_message(json{{"command", "launch"}}).find("command"), std::string::npos);
  json t = minimal_generate();
  t["command"] = "tailfit";
  t["model"].erase("mu");
  t["model"]["m"] = 100;
  EXPECT_NE(config_error_message(t).find("model.mu"), std::string::npos);
  EXPECT_ERROR_KIND(parse_config_text("{not json"), ErrorKind::config);
}

TEST(ParseConfig, TheoryDefaults) {
  const RunConfig cfg = parse_config(json::parse(R"({
    "command": "theory",
    "layer_distribution": {"family": "constant", "size": 2, "strength": 1},
    "theory": {"mu": 0.5}
  })"));
  EXPECT_EQ(cfg.theory->tail_epsilon, 1e-10);
  EXPECT_TRUE(cfg.theory->bidegree);
}

TEST(ConfigRoundTrip, SerializeThenParseIsIdentity) {
  std::vector<json> docs;
  docs.push_back(minimal_generate());
  docs.push_back(json::parse(R"({
    "command": "theory",
    "layer_distribution": {"family": "tabular", "atoms": [
      {"size": 2, "strength": 1, "probability": 0.5}, {"size": 4, "strength": 1, "probability": 0.5}]},
    "theory": {"mu": 1.0, "tail_epsilon": 1e-12, "bidegree": false},
    "output": {"directory": "somewhere", "formats": ["json", "csv"]}
  })"));
  docs.push_back(json::parse(R"({
    "command": "converge",
    "layer_distribution": {"family": "power_law", "alpha": 3, "beta": 0.5, "b": 1, "x_min": 1, "x_max": 300},
    "study": {"mu": 1, "n_grid": [100, 1000], "replications": 4, "seed": 5,
              "metrics": ["tv1", "tail_slope", "subgraph_counts"], "fit_range": [10, 40]}
  })"));
  docs.push_back(json::parse(R"({
    "command": "tailfit",
    "layer_distribution": {"family": "power_law", "alpha": 2.5, "beta": 0.6, "b": 1, "x_min": 1, "x_max": 2000},
    "model": {"n": 1000, "mu": 1.0, "seed": 11, "keep_layer_records": true},
    "tailfit": {"t_lo": 15, "t_hi": 90, "replications": 3}
  })"));
  docs.push_back(json::parse(R"({
    "command": "empirical",
    "empirical": {"edge_list": "g.txt", "n": 12}
  })"));
  for (const json& d : docs) {
    const RunConfig cfg = parse_config(d);
    const json once = to_json(cfg);
    EXPECT_EQ(parse_config(once), cfg) << once.dump();
    EXPECT_EQ(to_json(parse_config(once)), once);
  }
}

TEST(EdgeList, WriteReadRoundTrip) {
  GraphSample g;
  g.n = 6;
  g.edges = {{1, 2}, {1, 6}, {3, 4}};
  std::stringstream ss;
  write_edge_list(ss, g, 9, 42);
  EXPECT_EQ(ss.str(), "# superpose-net n=6 m=9 seed=42\n1 2\n1 6\n3 4\n");
  const GraphSample back = read_edge_list(ss);
  EXPECT_EQ(back.n, 6u);
  EXPECT_EQ(back.edges, g.edges);
}

TEST(EdgeList, NormalizesAndRejectsBadInput) {
  std::stringstream a("# external graph\n3 1\n1 3\n2 1\n");
  const GraphSample g = read_edge_list(a);
  EXPECT_EQ(g.n, 3u);
  EXPECT_EQ(g.edges, (std::vector<Edge>{{1, 2}, {1, 3}}));
  std::stringstream b("1 1\n");
  EXPECT_ERROR_KIND(read_edge_list(b), ErrorKind::io);
  std::stringstream c("1 x\n");
  EXPECT_ERROR_KIND(read_edge_list(c), ErrorKind::io);
  std::stringstream d("# superpose-net n=3 m=1 seed=0\n1 5\n");
  EXPECT_ERROR_KIND(read_edge_list(d), ErrorKind::io);
}

TEST(Dispatch, TheoryOnConstantTwoOne) {
  const fs::path out = scratch("theory");
  const json doc = json::parse(R"({
    "command": "theory",
    "layer_distribution": {"family": "constant", "size": 2, "strength": 1},
    "theory": {"mu": 0.5}
  })");
  ASSERT_EQ(run(doc, out), 0);
  std::ifstream in(out / "degree_pmf.csv");
  const Pmf1D f = read_pmf1d_csv(in);
  double p = std::exp(-1.0);
  for (int k = 0; k < 12; ++k, p /= k) EXPECT_NEAR(f[k], p, 1e-15) << k;
  const json summary = read_json(out / "summary.json");
  EXPECT_EQ(summary.at("assortativity").get<double>(), 0.0);
  EXPECT_NEAR(summary.at("rank_correlations").at("kendall").get<double>(), 0.0, 1e-12);
  const json manifest = read_json(out / "manifest.json");
  RunConfig echoed = parse_config(doc);
  echoed.output.directory = out.string();
  EXPECT_EQ(parse_config(manifest.at("config")), echoed);
  EXPECT_EQ(manifest.at("config").at("theory").at("tail_epsilon").get<double>(), 1e-10);
  EXPECT_TRUE(manifest.at("mass_defects").contains("degree"));
  EXPECT_TRUE(manifest.contains("version"));
}

TEST(Dispatch, EmpiricalOnThreeNodePath) {
  const fs::path out = scratch("empirical");
  {
    std::ofstream g(out / "path.txt");
    g << "1 2\n2 3\n";
  }
  json doc = {{"command", "empirical"}, {"empirical", {{"edge_list", (out / "path.txt").string()}}}};
  ASSERT_EQ(run(doc, out / "result"), 0);
  const json summary = read_json(out / "result" / "summary.json");
  EXPECT_NEAR(summary.at("assortativity").get<double>(), -1.0, 1e-15);
}

TEST(Dispatch, EmpiricalOnRegularGraphRecordsDegenerateStatistic) {
  const fs::path out = scratch("regular");
  {
    std::ofstream g(out / "k4.txt");
    g << "1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n";
  }
  json doc = {{"command", "empirical"}, {"empirical", {{"edge_list", (out / "k4.txt").string()}}}};
  ASSERT_EQ(run(doc, out / "result"), 0);
  const json summary = read_json(out / "result" / "summary.json");
  EXPECT_EQ(summary.at("assortativity").at("error"), "DegenerateMarginal");
}

TEST(Dispatch, GenerateIsByteIdenticalAcrossRunsAndThreads) {
  json doc = minimal_generate();
  doc["model"]["n"] = 3000;
  doc["model"]["keep_layer_records"] = true;
  doc["output"] = {{"formats", {"csv", "json"}}};
  const fs::path a = scratch("gen_a"), b = scratch("gen_b"), c = scratch("gen_c");
  ASSERT_EQ(run(doc, a, 1), 0);
  ASSERT_EQ(run(doc, b, 1), 0);
  ASSERT_EQ(run(doc, c, 4), 0);
  for (const char* f : {"edges.txt", "layers.jsonl", "degree_pmf.csv", "summary.json"}) {
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    EXPECT_EQ(slurp(a / f), slurp(c / f)) << f;
  }
  // Manifests differ only in the output directory they record.
  auto strip = [](json m) {
    m["config"]["output"].erase("directory");
    return m;
  };
  EXPECT_EQ(strip(read_json(a / "manifest.json")), strip(read_json(c / "manifest.json")));
  EXPECT_EQ(slurp(a / "edges.txt").rfind("# superpose-net n=3000 m=3000 seed=7\n", 0), 0u);
}

TEST(Dispatch, SeedOverrideChangesOutput) {
  json doc = minimal_generate();
  const fs::path a = scratch("seed_a"), b = scratch("seed_b");
  ASSERT_EQ(run(doc, a), 0);
  RunConfig cfg = parse_config(doc);
  apply_overrides(cfg, RunOptions{1, b.string(), 8});
  std::ostringstream err;
  ASSERT_EQ(dispatch(cfg, 1, err), 0);
  EXPECT_NE(slurp(a / "edges.txt"), slurp(b / "edges.txt"));
  EXPECT_EQ(read_json(b / "manifest.json").at("seed"), 8);
}

TEST(Dispatch, ConvergeWritesHashedReport) {
  const fs::path out = scratch("converge");
  const json doc = json::parse(R"({
    "command": "converge",
    "layer_distribution": {"family": "constant", "size": 3, "strength": 0.5},
    "study": {"mu": 1, "n_grid": [100, 200], "replications": 2, "seed": 4}
  })");
  ASSERT_EQ(run(doc, out), 0);
  const RunConfig cfg = parse_config(doc);
  const std::string stem = "seed4_" + spec_hash(*cfg.study);
  EXPECT_TRUE(fs::exists(out / ("report_" + stem + ".csv")));
  EXPECT_TRUE(fs::exists(out / ("summary_" + stem + ".json")));
}

TEST(ExitCodes, Mapping) {
  EXPECT_EQ(exit_code_for(ErrorKind::config), 1);
  EXPECT_EQ(exit_code_for(ErrorKind::degenerate_marginal), 2);
  EXPECT_EQ(exit_code_for(ErrorKind::zero_p10), 2);
  EXPECT_EQ(exit_code_for(ErrorKind::hypothesis_violation), 3);
  EXPECT_EQ(exit_code_for(ErrorKind::io), 4);
}

TEST(ExitCodes, DispatchFailures) {
  const fs::path out = scratch("failures");
  json hyp = json::parse(R"({
    "command": "tailfit",
    "layer_distribution": {"family": "power_law", "alpha": 2.5, "beta": 0.4, "b": 1, "x_min": 1, "x_max": 100},
    "model": {"n": 200, "mu": 1, "seed": 1}
  })");
  EXPECT_EQ(run(hyp, out / "hyp"), 3);
  const json err = read_json(out / "hyp" / "error.json");
  EXPECT_EQ(err.at("error"), "HypothesisViolation");
  EXPECT_EQ(err.at("exit_code"), 3);

  json missing = {{"command", "empirical"}, {"empirical", {{"edge_list", (out / "absent.txt").string()}}}};
  EXPECT_EQ(run(missing, out / "io"), 4);

  json degenerate = json::parse(R"({
    "command": "theory",
    "layer_distribution": {"family": "constant", "size": 0, "strength": 0.5},
    "theory": {"mu": 1}
  })");
  EXPECT_EQ(run(degenerate, out / "deg"), 2);
}
