#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "superpose/empirical_stats.hpp"
#include "superpose/layer_model.hpp"
#include "superpose/pmf.hpp"

namespace superpose {

enum class Metric { tv1, tv2, assortativity, kendall, spearman, tail_slope, subgraph_counts };

std::string_view to_string(Metric m);
std::optional<Metric> metric_from_string(std::string_view name);

/// Half the L1 distance over the union support. Each law's mass_defect counts
/// as mass the other lacks, so the result bounds the true distance from above.
double tv_distance_1d(const Pmf1D& f, const Pmf1D& g);
double tv_distance_2d(const Pmf2D& f, const Pmf2D& g);

struct FitRange {
  std::uint64_t lo = 10;
  std::uint64_t hi = 0;

  friend bool operator==(const FitRange&, const FitRange&) = default;
};

struct SlopeFit {
  double slope = 0.0;      // magnitude of the log-log slope
  double std_error = 0.0;  // regression standard error of the slope
  std::size_t points = 0;
};

/// Least-squares fit of log f(t) against log t over the positive entries of f
/// in [range.lo, range.hi]. Throws InsufficientSupport with fewer than 5 points.
SlopeFit tail_slope_fit(const Pmf1D& f, FitRange range);

/// Same fit on the size-biased law of observed degrees.
SlopeFit tail_slope_fit(const DegreeCounts& degrees, FitRange range);

/// lo = 10; hi = largest t whose size-biased observation count t * counts[t]
/// is at least 50.
FitRange default_fit_range(const DegreeCounts& degrees);

struct StudySpec {
  LayerTypeDistribution dist = LayerTypeDistribution::constant(2, 1.0);
  double mu = 1.0;
  std::vector<std::uint64_t> n_grid;
  std::uint64_t replications = 1;
  std::uint64_t seed = 0;
  std::vector<Metric> metrics;
  std::optional<FitRange> fit_range;
  double tail_epsilon = 1e-10;

  void validate() const;
  bool wants(Metric m) const;

  friend bool operator==(const StudySpec&, const StudySpec&) = default;
};

/// One metric on one replication; value is empty when the statistic is
/// undefined for that sample, with the reason in `status`.
struct CellValue {
  std::uint64_t n = 0;
  std::uint64_t replication = 0;
  std::string metric;
  std::optional<double> value;
  std::string status = "ok";
};

struct SummaryRow {
  std::uint64_t n = 0;
  std::string metric;
  std::uint64_t count = 0;        // replications with a defined value
  std::uint64_t degenerate = 0;   // replications without one
  std::optional<double> mean;
  std::optional<double> std_error;  // empty when fewer than 2 values (single shot)
  std::optional<double> pooled;     // statistic of the pmf pooled over replications
  std::string pooled_status = "ok";
};

struct TheoryRow {
  std::map<std::string, double> values;
  std::map<std::string, std::string> notes;  // metrics without a theory value, and why
};

struct ConvergenceReport {
  StudySpec spec;
  std::vector<CellValue> cells;
  std::vector<SummaryRow> summary;
  TheoryRow theory;

  const SummaryRow* find(std::uint64_t n, std::string_view metric) const;
};

/// Replicated Monte Carlo comparison of empirical statistics to their limits.
/// Cell (i, r) generates with seed derive_key(spec.seed, i, r); output is a
/// pure function of spec and independent of `threads`. Bidegree-based
/// statistics are also reported on the pmf pooled over all replications at a
/// given n, which by exchangeability estimates the law of the degrees of a
/// fixed adjacent pair.
ConvergenceReport run_study(const StudySpec& spec, unsigned threads = 1);

/// One row per (n, replication, metric) with a leading comment header.
void write_report_csv(std::ostream& out, const ConvergenceReport& report);
nlohmann::json summary_json(const ConvergenceReport& report);

/// 16 hex digits of FNV-1a over the canonical JSON of the spec.
std::string spec_hash(const StudySpec& spec);

}  // namespace superpose
