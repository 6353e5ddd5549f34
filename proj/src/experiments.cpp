#include "superpose/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>

#include "superpose/error.hpp"
#include "superpose/graph_gen.hpp"
#include "superpose/json_io.hpp"
#include "superpose/limit_theory.hpp"
#include "superpose/numeric.hpp"
#include "superpose/parallel.hpp"
#include "superpose/rng.hpp"

namespace superpose {
namespace {

constexpr std::array<std::pair<Metric, std::string_view>, 7> kMetricNames{{
    {Metric::tv1, "tv1"},
    {Metric::tv2, "tv2"},
    {Metric::assortativity, "assortativity"},
    {Metric::kendall, "kendall"},
    {Metric::spearman, "spearman"},
    {Metric::tail_slope, "tail_slope"},
    {Metric::subgraph_counts, "subgraph_counts"},
}};

// Column names emitted per metric; subgraph_counts expands to three.
std::vector<std::string> metric_columns(Metric m) {
  if (m == Metric::subgraph_counts) return {"links", "two_stars", "three_stars"};
  return {std::string(to_string(m))};
}

std::string degenerate_status(const Error& e) {
  return "degenerate: " + std::string(to_string(e.kind())) + ": " + e.what();
}

}  // namespace

std::string_view to_string(Metric m) {
  for (const auto& [metric, name] : kMetricNames) {
    if (metric == m) return name;
  }
  return "unknown";
}

std::optional<Metric> metric_from_string(std::string_view name) {
  for (const auto& [metric, n] : kMetricNames) {
    if (n == name) return metric;
  }
  return std::nullopt;
}

double tv_distance_1d(const Pmf1D& f, const Pmf1D& g) {
  CompensatedSum acc;
  const std::size_t size = std::max(f.size(), g.size());
  for (std::size_t s = 0; s < size; ++s) acc += std::fabs(f[s] - g[s]);
  acc += f.mass_defect;
  acc += g.mass_defect;
  return std::min(1.0, 0.5 * acc.value());
}

double tv_distance_2d(const Pmf2D& f, const Pmf2D& g) {
  CompensatedSum acc;
  const std::size_t rows = std::max(f.rows(), g.rows());
  const std::size_t cols = std::max(f.cols(), g.cols());
  for (std::size_t s = 0; s < rows; ++s) {
    for (std::size_t t = 0; t < cols; ++t) acc += std::fabs(f.at(s, t) - g.at(s, t));
  }
  acc += f.mass_defect;
  acc += g.mass_defect;
  return std::min(1.0, 0.5 * acc.value());
}

SlopeFit tail_slope_fit(const Pmf1D& f, FitRange range) {
  std::vector<double> xs, ys;
  const std::uint64_t hi = std::min<std::uint64_t>(range.hi, f.size() == 0 ? 0 : f.size() - 1);
  for (std::uint64_t t = std::max<std::uint64_t>(range.lo, 1); t <= hi; ++t) {
    if (f.prob[t] > 0.0) {
      xs.push_back(std::log(static_cast<double>(t)));
      ys.push_back(std::log(f.prob[t]));
    }
  }
  if (xs.size() < 5) {
    throw Error(ErrorKind::insufficient_support,
                "tail fit needs at least 5 positive points in [" + std::to_string(range.lo) + ", " +
                    std::to_string(range.hi) + "], found " + std::to_string(xs.size()));
  }
  const double k = static_cast<double>(xs.size());
  CompensatedSum sx, sy;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx.value() / k;
  const double my = sy.value() / k;
  CompensatedSum sxx, sxy;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy.value() / sxx.value();
  const double intercept = my - slope * mx;
  CompensatedSum ssr;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + slope * xs[i]);
    ssr += r * r;
  }
  return {-slope, std::sqrt(ssr.value() / (k - 2.0) / sxx.value()), xs.size()};
}

SlopeFit tail_slope_fit(const DegreeCounts& degrees, FitRange range) {
  return tail_slope_fit(size_biased(degrees.to_pmf()), range);
}

FitRange default_fit_range(const DegreeCounts& degrees) {
  FitRange range;
  range.hi = 0;
  for (std::uint64_t t = 0; t < degrees.counts.size(); ++t) {
    if (t * degrees.counts[t] >= 50) range.hi = t;
  }
  return range;
}

void StudySpec::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw Error(ErrorKind::invalid_argument, "mu must be positive");
  if (n_grid.empty()) throw Error(ErrorKind::invalid_argument, "n_grid is empty");
  if (!std::is_sorted(n_grid.begin(), n_grid.end())) {
    throw Error(ErrorKind::invalid_argument, "n_grid must be sorted ascending");
  }
  if (n_grid.front() < 2) throw Error(ErrorKind::invalid_argument, "n_grid entries must be >= 2");
  if (replications < 1) throw Error(ErrorKind::invalid_argument, "replications must be >= 1");
  if (metrics.empty()) throw Error(ErrorKind::invalid_argument, "no metrics requested");
  if (fit_range && fit_range->hi < fit_range->lo) throw Error(ErrorKind::invalid_argument, "fit_range is empty");
  if (!(tail_epsilon > 0.0 && tail_epsilon < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "tail_epsilon must lie in (0,1)");
  }
}

bool StudySpec::wants(Metric m) const { return std::find(metrics.begin(), metrics.end(), m) != metrics.end(); }

const SummaryRow* ConvergenceReport::find(std::uint64_t n, std::string_view metric) const {
  for (const auto& row : summary) {
    if (row.n == n && row.metric == metric) return &row;
  }
  return nullptr;
}

namespace {

struct TheoryLaws {
  std::optional<Pmf1D> degree;
  std::optional<Pmf2D> bidegree;
};

TheoryLaws compute_theory(const StudySpec& spec, TheoryRow& row) {
  const LimitParams params{spec.mu, spec.dist, spec.tail_epsilon};
  const CrossMoments p = cross_moments(spec.dist);
  if (!(p.p10 > 0.0)) throw Error(ErrorKind::zero_p10, "study needs P10 > 0");
  if (!(p.p21 > 0.0)) throw Error(ErrorKind::zero_edge_mass, "study needs P21 > 0");

  TheoryLaws laws;
  if (spec.wants(Metric::tv1)) {
    laws.degree = limiting_degree_pmf(params);
    row.values["mass_defect_degree"] = laws.degree->mass_defect;
  }
  if (spec.wants(Metric::tv2) || spec.wants(Metric::kendall) || spec.wants(Metric::spearman)) {
    laws.bidegree = limiting_bidegree_pmf(params);
    row.values["mass_defect_bidegree"] = laws.bidegree->mass_defect;
  }
  if (spec.wants(Metric::tv1)) row.values["tv1"] = 0.0;
  if (spec.wants(Metric::tv2)) row.values["tv2"] = 0.0;
  if (spec.wants(Metric::assortativity)) {
    try {
      row.values["assortativity"] = limiting_assortativity(params);
    } catch (const Error& e) {
      row.notes["assortativity"] = degenerate_status(e);
    }
  }
  auto rank = [&](Metric m, double (*fn)(const Pmf2D&)) {
    if (!spec.wants(m)) return;
    try {
      row.values[std::string(to_string(m))] = fn(*laws.bidegree);
    } catch (const Error& e) {
      row.notes[std::string(to_string(m))] = degenerate_status(e);
    }
  };
  rank(Metric::kendall, &kendall);
  rank(Metric::spearman, &spearman);
  if (spec.wants(Metric::tail_slope)) {
    const auto& pl = spec.dist.power_law_params();
    if (!pl) {
      row.notes["tail_slope"] = "no prediction: layer distribution is not a power law";
    } else {
      try {
        row.values["tail_slope"] = tail_prediction(pl->alpha, pl->beta, pl->b, spec.mu, spec.dist).marginal_exponent;
      } catch (const Error& e) {
        row.notes["tail_slope"] = std::string(to_string(e.kind())) + ": " + e.what();
      }
    }
  }
  if (spec.wants(Metric::subgraph_counts)) {
    row.values["links"] = 0.5 * p.p21;
    row.values["two_stars"] = 0.5 * p.p32;
    row.values["three_stars"] = p.p43 / 6.0;
  }
  return laws;
}

struct CellResult {
  DegreeCounts degrees;
  BidegreeCounts bidegrees;
  std::map<std::string, CellValue> values;
};

void record(CellResult& cell, std::uint64_t n, std::uint64_t rep, const std::string& metric,
            const std::function<double()>& compute) {
  CellValue v{n, rep, metric, std::nullopt, "ok"};
  try {
    v.value = compute();
  } catch (const Error& e) {
    if (!is_degenerate(e.kind())) throw;
    v.status = degenerate_status(e);
  }
  cell.values[metric] = std::move(v);
}

}  // namespace

ConvergenceReport run_study(const StudySpec& spec, unsigned threads) {
  spec.validate();
  ConvergenceReport report;
  report.spec = spec;
  const TheoryLaws laws = compute_theory(spec, report.theory);

  const std::size_t grid = spec.n_grid.size();
  const std::size_t cells = grid * spec.replications;
  std::vector<CellResult> results(cells);

  // Everything except the tail fit, whose default range depends on the pooled sample.
  parallel_blocks(cells, threads, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t c = begin; c < end; ++c) {
      const std::size_t i = c / spec.replications;
      const std::uint64_t rep = c % spec.replications;
      const std::uint64_t n = spec.n_grid[i];
      GenConfig config;
      config.n = n;
      config.mu = spec.mu;
      config.seed = derive_key(spec.seed, i, rep);
      config.keep_layer_records = spec.wants(Metric::subgraph_counts);
      const GraphSample g = generate_graph(config, spec.dist);

      CellResult& cell = results[c];
      cell.degrees = degree_counts(g);
      cell.bidegrees = bidegree_counts(g);
      std::optional<Pmf2D> bidegree;
      auto get_bidegree = [&]() -> const Pmf2D& {
        if (!bidegree) bidegree = cell.bidegrees.to_pmf();
        return *bidegree;
      };
      if (spec.wants(Metric::tv1)) {
        record(cell, n, rep, "tv1", [&] { return tv_distance_1d(cell.degrees.to_pmf(), *laws.degree); });
      }
      if (spec.wants(Metric::tv2)) {
        record(cell, n, rep, "tv2", [&] { return tv_distance_2d(get_bidegree(), *laws.bidegree); });
      }
      if (spec.wants(Metric::assortativity)) {
        record(cell, n, rep, "assortativity", [&] { return pearson_correlation(get_bidegree()); });
      }
      if (spec.wants(Metric::kendall)) {
        record(cell, n, rep, "kendall", [&] { return kendall(get_bidegree()); });
      }
      if (spec.wants(Metric::spearman)) {
        record(cell, n, rep, "spearman", [&] { return spearman(get_bidegree()); });
      }
      if (spec.wants(Metric::subgraph_counts)) {
        std::optional<SubgraphMeans> means;
        auto get = [&]() -> const SubgraphMeans& {
          if (!means) means = layer_subgraph_counts(g);
          return *means;
        };
        record(cell, n, rep, "links", [&] { return get().links; });
        record(cell, n, rep, "two_stars", [&] { return get().two_stars; });
        record(cell, n, rep, "three_stars", [&] { return get().three_stars; });
      }
    }
  });

  for (std::size_t i = 0; i < grid; ++i) {
    const std::uint64_t n = spec.n_grid[i];
    DegreeCounts pooled_degrees;
    BidegreeCounts pooled_bidegrees;
    for (std::uint64_t rep = 0; rep < spec.replications; ++rep) {
      const CellResult& cell = results[i * spec.replications + rep];
      pooled_degrees.merge(cell.degrees);
      pooled_bidegrees.merge(cell.bidegrees);
    }

    if (spec.wants(Metric::tail_slope)) {
      const FitRange range = spec.fit_range.value_or(default_fit_range(pooled_degrees));
      for (std::uint64_t rep = 0; rep < spec.replications; ++rep) {
        CellResult& cell = results[i * spec.replications + rep];
        record(cell, n, rep, "tail_slope", [&] { return tail_slope_fit(cell.degrees, range).slope; });
      }
    }

    // Pooled statistics per metric column.
    std::map<std::string, std::pair<std::optional<double>, std::string>> pooled;
    auto pool = [&](const std::string& name, const std::function<double()>& compute) {
      try {
        pooled[name] = {compute(), "ok"};
      } catch (const Error& e) {
        if (!is_degenerate(e.kind())) throw;
        pooled[name] = {std::nullopt, degenerate_status(e)};
      }
    };
    std::optional<Pmf2D> pooled_pmf;
    auto get_pooled = [&]() -> const Pmf2D& {
      if (!pooled_pmf) pooled_pmf = pooled_bidegrees.to_pmf();
      return *pooled_pmf;
    };
    if (spec.wants(Metric::tv1)) pool("tv1", [&] { return tv_distance_1d(pooled_degrees.to_pmf(), *laws.degree); });
    if (spec.wants(Metric::tv2)) pool("tv2", [&] { return tv_distance_2d(get_pooled(), *laws.bidegree); });
    if (spec.wants(Metric::assortativity)) pool("assortativity", [&] { return pearson_correlation(get_pooled()); });
    if (spec.wants(Metric::kendall)) pool("kendall", [&] { return kendall(get_pooled()); });
    if (spec.wants(Metric::spearman)) pool("spearman", [&] { return spearman(get_pooled()); });
    if (spec.wants(Metric::tail_slope)) {
      const FitRange range = spec.fit_range.value_or(default_fit_range(pooled_degrees));
      pool("tail_slope", [&] { return tail_slope_fit(pooled_degrees, range).slope; });
    }

    for (Metric m : spec.metrics) {
      for (const auto& column : metric_columns(m)) {
        SummaryRow row;
        row.n = n;
        row.metric = column;
        std::vector<double> values;
        for (std::uint64_t rep = 0; rep < spec.replications; ++rep) {
          const CellValue& v = results[i * spec.replications + rep].values.at(column);
          if (v.value) {
            values.push_back(*v.value);
          } else {
            ++row.degenerate;
          }
        }
        row.count = values.size();
        if (!values.empty()) {
          const double k = static_cast<double>(values.size());
          row.mean = compensated_total(values) / k;
          if (values.size() >= 2) {
            CompensatedSum ss;
            for (double v : values) ss += (v - *row.mean) * (v - *row.mean);
            row.std_error = std::sqrt(ss.value() / (k - 1.0) / k);
          }
        }
        if (auto it = pooled.find(column); it != pooled.end()) {
          row.pooled = it->second.first;
          row.pooled_status = it->second.second;
        }
        report.summary.push_back(std::move(row));
      }
    }
  }

  for (std::size_t c = 0; c < cells; ++c) {
    for (Metric m : spec.metrics) {
      for (const auto& column : metric_columns(m)) report.cells.push_back(results[c].values.at(column));
    }
  }
  return report;
}

void write_report_csv(std::ostream& out, const ConvergenceReport& report) {
  out << "# superpose-net convergence report seed=" << report.spec.seed << " spec=" << spec_hash(report.spec)
      << '\n';
  out << "# empirical bidegree laws pool all directed edges of a sample; by exchangeability this\n"
         "# estimates the bidegree law of a fixed adjacent node pair\n";
  out << "n,replication,metric,value,status\n";
  for (const auto& c : report.cells) {
    out << c.n << ',' << c.replication << ',' << c.metric << ',';
    if (c.value) out << format_double(*c.value);
    out << ',';
    // Status text may contain commas; quote it.
    std::string status = c.status;
    std::replace(status.begin(), status.end(), '"', '\'');
    out << '"' << status << "\"\n";
  }
}

nlohmann::json summary_json(const ConvergenceReport& report) {
  using nlohmann::json;
  auto opt = [](const std::optional<double>& v) -> json { return v ? json(*v) : json(nullptr); };
  json rows = json::array();
  for (const auto& r : report.summary) {
    json row = {{"n", r.n},
                {"metric", r.metric},
                {"count", r.count},
                {"degenerate", r.degenerate},
                {"mean", opt(r.mean)},
                {"std_error", opt(r.std_error)},
                {"single_shot", r.count < 2},
                {"pooled", opt(r.pooled)},
                {"pooled_status", r.pooled_status}};
    if (auto it = report.theory.values.find(r.metric); it != report.theory.values.end()) row["theory"] = it->second;
    rows.push_back(row);
  }
  return {{"spec", to_json(report.spec)},
          {"spec_hash", spec_hash(report.spec)},
          {"notes",
           {"empirical bidegree laws pool all directed edges of a sample (and, for the pooled column, all "
            "replications); by exchangeability this estimates the bidegree law of a fixed adjacent node pair",
            "tail fits use the size-biased degree law (the bidegree marginal); default range t in [10, largest t "
            "with at least 50 pooled observations]"}},
          {"theory", {{"values", report.theory.values}, {"notes", report.theory.notes}}},
          {"summary", rows}};
}

std::string spec_hash(const StudySpec& spec) {
  const std::string text = to_json(spec).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace superpose
