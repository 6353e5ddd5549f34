#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "superpose/error.hpp"
#include "superpose/experiments.hpp"
#include "superpose/graph_gen.hpp"
#include "superpose/layer_model.hpp"

namespace superpose::cli {

enum class Command { generate, empirical, theory, converge, tailfit };

std::string_view to_string(Command c);
std::optional<Command> command_from_string(std::string_view name);

struct ModelSection {
  std::uint64_t n = 0;
  std::optional<std::uint64_t> m;
  std::optional<double> mu;
  std::uint64_t seed = 0;
  bool keep_layer_records = false;

  friend bool operator==(const ModelSection&, const ModelSection&) = default;
};

struct TheorySection {
  double mu = 1.0;
  double tail_epsilon = 1e-10;
  bool bidegree = true;  // also emit the 2-D limiting laws

  friend bool operator==(const TheorySection&, const TheorySection&) = default;
};

struct EmpiricalSection {
  std::string edge_list;
  std::optional<std::uint64_t> n;  // overrides the edge-list header

  friend bool operator==(const EmpiricalSection&, const EmpiricalSection&) = default;
};

struct TailfitSection {
  FitRange range{20, 200};
  std::uint64_t replications = 1;

  friend bool operator==(const TailfitSection&, const TailfitSection&) = default;
};

struct OutputSection {
  std::string directory = "out";
  std::vector<std::string> formats{"csv"};

  bool has(std::string_view f) const;
  friend bool operator==(const OutputSection&, const OutputSection&) = default;
};

struct RunConfig {
  Command command = Command::generate;
  std::optional<LayerTypeDistribution> layer_distribution;
  std::optional<ModelSection> model;
  std::optional<TheorySection> theory;
  std::optional<StudySpec> study;
  std::optional<EmpiricalSection> empirical;
  std::optional<TailfitSection> tailfit;
  OutputSection output;

  GenConfig gen_config() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Validates a config document, applying defaults (tail_epsilon 1e-10,
/// formats [csv]). Throws ConfigError naming the field path.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::filesystem::path& path);

/// Canonical document with every default spelled out; parse_config inverts it.
nlohmann::json to_json(const RunConfig& config);

/// "# superpose-net n=<n> m=<m> seed=<seed>" then one "i j" line per edge.
void write_edge_list(std::ostream& out, const GraphSample& g, std::uint64_t m, std::uint64_t seed);

/// Reads "i j" lines (1-based; any order; '#' lines are comments). n comes from
/// an "n=<n>" header token, else from `n_override`, else the largest label.
GraphSample read_edge_list(std::istream& in, std::optional<std::uint64_t> n_override = std::nullopt);

struct RunOptions {
  unsigned threads = 1;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
};

/// Applies --seed / --out overrides to a parsed config.
void apply_overrides(RunConfig& config, const RunOptions& options);

/// Exit code for a library error: 1 config, 2 degenerate statistic,
/// 3 hypothesis violation, 4 I/O.
int exit_code_for(ErrorKind kind);

/// Runs the command, writing its outputs and manifest.json into the output
/// directory. On failure writes error.json there (when possible) and to `err`,
/// and returns the mapped exit code.
int dispatch(const RunConfig& config, unsigned threads, std::ostream& err);

}  // namespace superpose::cli
