#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "pulearn/harness.hpp"

namespace pulearn {

// One aggregate cell: macro-averaged metric over datasets (per-dataset
// mean across repetitions first, then mean and population std across the
// dataset means), mirroring a mean+-std results table.
struct SummaryRow {
  Estimator estimator = Estimator::upu;
  Mechanism mechanism = Mechanism::scar;
  double labeled_ratio = 0.0;
  double prior_multiplier = 1.0;
  std::string metric;
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t n_datasets = 0;
  std::size_t n_runs = 0;
};

using Summary = std::vector<SummaryRow>;

inline const char* const kMetricNames[3] = {"roc_auc", "pr_auc",
                                            "r_precision"};

inline Summary aggregate(const std::vector<RunRecord>& records) {
  using CellKey = std::tuple<int, int, double, double>;
  struct DatasetAcc {
    double sums[3] = {0.0, 0.0, 0.0};
    std::size_t runs = 0;
  };
  std::map<CellKey, std::map<std::string, DatasetAcc>> cells;
  for (const auto& r : records) {
    if (!r.ok) continue;
    CellKey key{static_cast<int>(r.estimator), static_cast<int>(r.mechanism),
                r.labeled_ratio, r.prior_multiplier};
    DatasetAcc& acc = cells[key][r.dataset];
    acc.sums[0] += r.roc;
    acc.sums[1] += r.pr;
    acc.sums[2] += r.rprec;
    acc.runs += 1;
  }

  Summary out;
  for (const auto& [key, by_dataset] : cells) {
    for (int m = 0; m < 3; ++m) {
      SummaryRow row;
      row.estimator = static_cast<Estimator>(std::get<0>(key));
      row.mechanism = static_cast<Mechanism>(std::get<1>(key));
      row.labeled_ratio = std::get<2>(key);
      row.prior_multiplier = std::get<3>(key);
      row.metric = kMetricNames[m];
      std::vector<double> means;
      for (const auto& [ds, acc] : by_dataset) {
        means.push_back(acc.sums[m] / static_cast<double>(acc.runs));
        row.n_runs += acc.runs;
      }
      row.n_datasets = means.size();
      double mu = 0.0;
      for (double v : means) mu += v;
      mu /= static_cast<double>(means.size());
      double var = 0.0;
      for (double v : means) var += (v - mu) * (v - mu);
      var /= static_cast<double>(means.size());
      row.mean = mu;
      row.stddev = std::sqrt(var);
      out.push_back(std::move(row));
    }
  }
  return out;
}

// Grid run plus aggregation for the prior-misspecification experiment.
// Multipliers come back in ascending order along the summary rows.
inline Summary sensitivity_sweep(const ExperimentConfig& config) {
  bool has_focused = false;
  for (Estimator e : config.estimators)
    if (e == Estimator::ifpu) has_focused = true;
  if (!has_focused)
    fail(Errc::invalid_argument,
         "sensitivity sweep needs the focused estimator in the mix");
  return aggregate(run_grid(config));
}

enum class ReportFormat { csv, json, markdown };

inline ReportFormat parse_report_format(std::string_view s) {
  if (s == "csv") return ReportFormat::csv;
  if (s == "json") return ReportFormat::json;
  if (s == "markdown" || s == "md") return ReportFormat::markdown;
  fail(Errc::invalid_argument, "unknown report format: " + std::string(s));
}

namespace detail {

inline std::string ratio_key(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

inline void emit_summary_csv(const Summary& summary, std::ostream& out) {
  out << "estimator,mechanism,labeled_ratio,prior_multiplier,metric,mean,"
         "std,n_datasets,n_runs\n";
  for (const auto& row : summary) {
    out << estimator_name(row.estimator) << ","
        << mechanism_name(row.mechanism) << ","
        << format_double(row.labeled_ratio) << ","
        << format_double(row.prior_multiplier) << "," << row.metric << ","
        << format_double(row.mean) << "," << format_double(row.stddev) << ","
        << row.n_datasets << "," << row.n_runs << "\n";
  }
}

inline void emit_summary_json(const Summary& summary, std::ostream& out) {
  nlohmann::ordered_json root;
  for (const auto& row : summary) {
    nlohmann::ordered_json cell;
    cell["mean"] = row.mean;
    cell["std"] = row.stddev;
    cell["n_datasets"] = row.n_datasets;
    cell["n_runs"] = row.n_runs;
    root[estimator_name(row.estimator)][mechanism_name(row.mechanism)]
        [ratio_key(row.labeled_ratio)][ratio_key(row.prior_multiplier)]
        [row.metric] = cell;
  }
  out << root.dump(2) << "\n";
}

inline void emit_summary_markdown(const Summary& summary, std::ostream& out) {
  // one table per (mechanism, multiplier); estimators as rows; metric x
  // labeled-ratio as column groups
  std::map<std::pair<int, double>, std::vector<const SummaryRow*>> tables;
  for (const auto& row : summary)
    tables[{static_cast<int>(row.mechanism), row.prior_multiplier}]
        .push_back(&row);
  for (const auto& [key, rows] : tables) {
    std::vector<double> ratios;
    std::vector<Estimator> estimators;
    for (const SummaryRow* r : rows) {
      if (std::find(ratios.begin(), ratios.end(), r->labeled_ratio) ==
          ratios.end())
        ratios.push_back(r->labeled_ratio);
      if (std::find(estimators.begin(), estimators.end(), r->estimator) ==
          estimators.end())
        estimators.push_back(r->estimator);
    }
    std::sort(ratios.begin(), ratios.end());
    std::sort(estimators.begin(), estimators.end());

    out << "## mechanism " << mechanism_name(static_cast<Mechanism>(key.first))
        << ", prior multiplier " << ratio_key(key.second) << "\n\n";
    out << "| estimator |";
    for (const char* metric : kMetricNames)
      for (double r : ratios) out << " " << metric << " @" << ratio_key(r)
                                  << " |";
    out << "\n|---|";
    for (int i = 0; i < 3 * static_cast<int>(ratios.size()); ++i)
      out << "---|";
    out << "\n";
    for (Estimator est : estimators) {
      out << "| " << estimator_name(est) << " |";
      for (const char* metric : kMetricNames) {
        for (double ratio : ratios) {
          const SummaryRow* found = nullptr;
          for (const SummaryRow* r : rows)
            if (r->estimator == est && r->labeled_ratio == ratio &&
                r->metric == metric)
              found = r;
          if (found) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), " %.3f ± %.3f |", found->mean,
                          found->stddev);
            out << buf;
          } else {
            out << " n/a |";
          }
        }
      }
      out << "\n";
    }
    out << "\n";
  }
}

}  // namespace detail

inline void emit_report(const Summary& summary, ReportFormat format,
                        const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(Errc::io_error, "cannot write " + path);
  switch (format) {
    case ReportFormat::csv: detail::emit_summary_csv(summary, out); break;
    case ReportFormat::json: detail::emit_summary_json(summary, out); break;
    case ReportFormat::markdown:
      detail::emit_summary_markdown(summary, out);
      break;
  }
  if (!out) fail(Errc::io_error, "short write to " + path);
}

// Exact inverse of the CSV report (doubles are printed with %.17g, which
// round-trips).
inline Summary parse_summary_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::missing_file, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    fail(Errc::empty_input, path + " is empty");
  Summary out;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto cells = split_line(trim(line), ',');
    if (cells.size() != 9)
      fail(Errc::dimension_mismatch, "summary row needs 9 cells: " + line);
    SummaryRow row;
    row.estimator = parse_estimator(trim(cells[0]));
    row.mechanism = parse_mechanism(trim(cells[1]));
    double nd = 0.0, nr = 0.0;
    if (!try_parse_double(cells[2], row.labeled_ratio) ||
        !try_parse_double(cells[3], row.prior_multiplier) ||
        !try_parse_double(cells[5], row.mean) ||
        !try_parse_double(cells[6], row.stddev) ||
        !try_parse_double(cells[7], nd) || !try_parse_double(cells[8], nr))
      fail(Errc::non_numeric_cell, "bad summary row: " + line);
    row.metric = std::string(trim(cells[4]));
    row.n_datasets = static_cast<std::size_t>(nd);
    row.n_runs = static_cast<std::size_t>(nr);
    out.push_back(std::move(row));
  }
  return out;
}

inline std::string sanitize_cell(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

// Raw per-run metrics, one row per run, so downstream tools can run their
// own statistics.
inline void write_run_records_csv(const std::vector<RunRecord>& records,
                                  const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(Errc::io_error, "cannot write " + path);
  out << "dataset,mechanism,labeled_ratio,estimator,prior_multiplier,"
         "repetition,seed,prior_used,roc_auc,pr_auc,r_precision,clamp_rate,"
         "wall_seconds,ok,error\n";
  for (const auto& r : records) {
    out << sanitize_cell(r.dataset) << "," << mechanism_name(r.mechanism)
        << "," << format_double(r.labeled_ratio) << ","
        << estimator_name(r.estimator) << ","
        << format_double(r.prior_multiplier) << "," << r.repetition << ","
        << r.seed << "," << format_double(r.prior_used) << ","
        << format_double(r.roc) << "," << format_double(r.pr) << ","
        << format_double(r.rprec) << "," << format_double(r.clamp_rate)
        << "," << format_double(r.wall_seconds) << "," << (r.ok ? 1 : 0)
        << "," << sanitize_cell(r.error) << "\n";
  }
  if (!out) fail(Errc::io_error, "short write to " + path);
}

}  // namespace pulearn
