#pragma once

#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "pulearn/csv.hpp"
#include "pulearn/harness.hpp"

namespace pulearn {

inline std::vector<std::string_view> split_list(std::string_view s,
                                                char delim = ',') {
  std::vector<std::string_view> out;
  for (auto cell : split_line(s, delim)) {
    cell = trim(cell);
    if (!cell.empty()) out.push_back(cell);
  }
  return out;
}

inline double parse_double_or_fail(std::string_view s,
                                   const std::string& what) {
  double v = 0.0;
  if (!try_parse_double(s, v))
    fail(Errc::non_numeric_cell, "bad " + what + ": " + std::string(s));
  return v;
}

inline std::vector<double> parse_double_list(std::string_view s,
                                             const std::string& what) {
  std::vector<double> out;
  for (auto cell : split_list(s)) out.push_back(parse_double_or_fail(cell, what));
  if (out.empty()) fail(Errc::empty_input, "empty list for " + what);
  return out;
}

inline std::vector<Mechanism> parse_mechanism_list(std::string_view s) {
  std::vector<Mechanism> out;
  for (auto cell : split_list(s)) out.push_back(parse_mechanism(cell));
  if (out.empty()) fail(Errc::empty_input, "empty mechanism list");
  return out;
}

inline std::vector<Estimator> parse_estimator_list(std::string_view s) {
  std::vector<Estimator> out;
  for (auto cell : split_list(s)) out.push_back(parse_estimator(cell));
  if (out.empty()) fail(Errc::empty_input, "empty estimator list");
  return out;
}

// Mixture spec grammar: key=value pairs separated by commas, e.g.
//   name=overlap,n=2000,d=10,ratio=0.02,sep=3,overlap_fraction=0.5
inline GaussianMixtureSpec parse_synth_spec(std::string_view s) {
  GaussianMixtureSpec spec;
  for (auto cell : split_list(s)) {
    auto eq = cell.find('=');
    if (eq == std::string_view::npos)
      fail(Errc::invalid_argument,
           "synth spec entries are key=value: " + std::string(cell));
    const std::string key{trim(cell.substr(0, eq))};
    const std::string_view value = trim(cell.substr(eq + 1));
    if (key == "name") spec.name = std::string(value);
    else if (key == "n")
      spec.n = static_cast<std::size_t>(parse_double_or_fail(value, key));
    else if (key == "d")
      spec.d = static_cast<std::size_t>(parse_double_or_fail(value, key));
    else if (key == "ratio")
      spec.positive_ratio = parse_double_or_fail(value, key);
    else if (key == "sep" || key == "separation")
      spec.separation = parse_double_or_fail(value, key);
    else if (key == "pos_sigma")
      spec.pos_sigma = parse_double_or_fail(value, key);
    else if (key == "neg_sigma")
      spec.neg_sigma = parse_double_or_fail(value, key);
    else if (key == "overlap_fraction")
      spec.overlap_fraction = parse_double_or_fail(value, key);
    else if (key == "overlap_shift")
      spec.overlap_shift = parse_double_or_fail(value, key);
    else
      fail(Errc::invalid_argument, "unknown synth spec key: " + key);
  }
  return spec;
}

// "synth:<spec>" or a CSV path.
inline DatasetSource parse_dataset_source(std::string_view s,
                                          const CsvSchema& schema) {
  s = trim(s);
  if (s.substr(0, 6) == "synth:")
    return synth_source(parse_synth_spec(s.substr(6)));
  return csv_source(std::string(s), schema);
}

// Everything the bench/sensitivity subcommands need: the experiment grid
// plus report destinations.
struct BenchSettings {
  ExperimentConfig experiment;
  CsvSchema schema;  // applied to CSV dataset sources
  std::vector<std::string> dataset_specs;
  std::string report_path = "report.csv";
  std::string runs_path;  // empty: skip the per-run dump
  std::string format = "csv";
  std::string catalog_path;  // empty: skip catalog validation
};

inline void apply_setting(BenchSettings& s, std::string_view key,
                          std::string_view value) {
  ExperimentConfig& e = s.experiment;
  if (key == "dataset") s.dataset_specs.emplace_back(value);
  else if (key == "datasets") {
    s.dataset_specs.clear();
    for (auto cell : split_list(value, ';'))
      s.dataset_specs.emplace_back(cell);
  } else if (key == "mechanisms") e.mechanisms = parse_mechanism_list(value);
  else if (key == "ratios")
    e.labeled_ratios = parse_double_list(value, "ratios");
  else if (key == "estimators") e.estimators = parse_estimator_list(value);
  else if (key == "multipliers")
    e.prior_multipliers = parse_double_list(value, "multipliers");
  else if (key == "repetitions")
    e.repetitions =
        static_cast<std::size_t>(parse_double_or_fail(value, "repetitions"));
  else if (key == "base_seed" || key == "seed")
    e.base_seed =
        static_cast<std::uint64_t>(parse_double_or_fail(value, "seed"));
  else if (key == "epochs")
    e.max_epochs =
        static_cast<std::size_t>(parse_double_or_fail(value, "epochs"));
  else if (key == "batch_size")
    e.batch_size =
        static_cast<std::size_t>(parse_double_or_fail(value, "batch_size"));
  else if (key == "learning_rate")
    e.learning_rate = parse_double_or_fail(value, "learning_rate");
  else if (key == "hidden")
    e.hidden_width =
        static_cast<std::size_t>(parse_double_or_fail(value, "hidden"));
  else if (key == "gamma") e.gamma = parse_double_or_fail(value, "gamma");
  else if (key == "train_fraction")
    e.train_fraction = parse_double_or_fail(value, "train_fraction");
  else if (key == "sar_exponent")
    e.sar.exponent = parse_double_or_fail(value, "sar_exponent");
  else if (key == "sar_space") {
    if (value == "standardized") e.sar.standardized_distances = true;
    else if (value == "raw") e.sar.standardized_distances = false;
    else
      fail(Errc::invalid_argument,
           "sar_space must be standardized or raw, got " + std::string(value));
  } else if (key == "threads")
    e.threads =
        static_cast<std::size_t>(parse_double_or_fail(value, "threads"));
  else if (key == "out") s.report_path = std::string(value);
  else if (key == "runs_out") s.runs_path = std::string(value);
  else if (key == "format") s.format = std::string(value);
  else if (key == "catalog") s.catalog_path = std::string(value);
  else if (key == "csv_header")
    s.schema.has_header = parse_double_or_fail(value, "csv_header") != 0.0;
  else if (key == "label_column")
    s.schema.label_column =
        static_cast<int>(parse_double_or_fail(value, "label_column"));
  else
    fail(Errc::invalid_argument, "unknown config key: " + std::string(key));
}

// Plain text "key = value" settings, one per line, # comments. Repeated
// `dataset` lines append; most other keys overwrite.
inline void load_settings_file(BenchSettings& s, const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::missing_file, "cannot open config " + path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string_view::npos)
      fail(Errc::invalid_argument,
           path + " line " + std::to_string(lineno) + ": expected key=value");
    apply_setting(s, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
}

// Dataset specs are kept as strings until the schema is final, then turned
// into sources here.
inline void finalize_datasets(BenchSettings& s) {
  s.experiment.datasets.clear();
  for (const auto& spec : s.dataset_specs)
    s.experiment.datasets.push_back(parse_dataset_source(spec, s.schema));
}

}  // namespace pulearn
