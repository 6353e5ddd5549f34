#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "superpose/cli.hpp"
#include "superpose/error.hpp"

namespace {

using superpose::Error;
using superpose::ErrorKind;
namespace cli = superpose::cli;

int report_error(const Error& e) {
  const int code = cli::exit_code_for(e.kind());
  std::cerr << nlohmann::json{{"error", std::string(superpose::to_string(e.kind()))},
                              {"message", e.what()},
                              {"exit_code", code}}
                   .dump()
            << '\n';
  return code;
}

cli::RunConfig load(const std::string& path, cli::Command command) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot read config file " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::config, std::string("config: invalid JSON: ") + e.what());
  }
  const std::string name(cli::to_string(command));
  if (!doc.is_object()) throw Error(ErrorKind::config, "config: expected an object");
  if (doc.contains("command") && doc["command"] != name) {
    throw Error(ErrorKind::config, "config.command: " + doc["command"].dump() + " conflicts with subcommand " + name);
  }
  doc["command"] = name;
  return cli::parse_config(doc);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator and limit analytics for superpositions of Bernoulli random graphs"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  unsigned threads = 1;

  struct Sub {
    cli::Command command;
    const char* help;
  };
  const Sub subs[] = {
      {cli::Command::generate, "Sample a superposition graph and write its edge list"},
      {cli::Command::empirical, "Degree/bidegree statistics of an edge-list file"},
      {cli::Command::theory, "Limiting degree and bidegree laws, assortativity, moments"},
      {cli::Command::converge, "Monte Carlo convergence study against the limits"},
      {cli::Command::tailfit, "Fit the size-biased degree tail and compare with the power-law prediction"},
  };
  std::vector<std::pair<CLI::App*, cli::Command>> registered;
  std::vector<CLI::Option*> seed_options;
  std::vector<CLI::Option*> out_options;
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(std::string(cli::to_string(s.command)), s.help);
    sub->add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    out_options.push_back(sub->add_option("--out", out_dir, "Output directory (overrides output.directory)"));
    seed_options.push_back(sub->add_option("--seed", seed, "Master seed (overrides model.seed / study.seed)"));
    sub->add_option("--threads", threads, "Worker threads; results do not depend on this")
        ->check(CLI::Range(1u, 1024u));
    registered.emplace_back(sub, s.command);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  for (std::size_t i = 0; i < registered.size(); ++i) {
    const auto& [sub, command] = registered[i];
    if (!sub->parsed()) continue;
    try {
      cli::RunConfig config = load(config_path, command);
      cli::RunOptions options;
      options.threads = threads;
      if (out_options[i]->count() > 0) options.out_dir = out_dir;
      if (seed_options[i]->count() > 0) options.seed = seed;
      cli::apply_overrides(config, options);
      return cli::dispatch(config, threads, std::cerr);
    } catch (const Error& e) {
      return report_error(e);
    }
  }
  return 1;
}
