#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cstdint>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "pulearn/csv.hpp"
#include "pulearn/dataset.hpp"
#include "pulearn/labeling.hpp"
#include "pulearn/metrics.hpp"
#include "pulearn/synth.hpp"
#include "pulearn/train.hpp"

namespace pulearn {

// A dataset slot in the grid: either a CSV file on disk or a synthetic
// mixture generated from the experiment's base seed.
struct DatasetSource {
  enum class Kind { csv, synthetic };
  Kind kind = Kind::synthetic;
  std::string csv_path;
  CsvSchema schema;
  GaussianMixtureSpec synth;

  std::string name() const {
    if (kind == Kind::synthetic) return synth.name;
    auto slash = csv_path.find_last_of('/');
    std::string base = slash == std::string::npos
                           ? csv_path
                           : csv_path.substr(slash + 1);
    auto dot = base.find_last_of('.');
    return dot == std::string::npos ? base : base.substr(0, dot);
  }
};

inline DatasetSource csv_source(std::string path, CsvSchema schema = {}) {
  DatasetSource s;
  s.kind = DatasetSource::Kind::csv;
  s.csv_path = std::move(path);
  s.schema = schema;
  return s;
}

inline DatasetSource synth_source(GaussianMixtureSpec spec) {
  DatasetSource s;
  s.kind = DatasetSource::Kind::synthetic;
  s.synth = std::move(spec);
  return s;
}

struct ExperimentConfig {
  std::vector<DatasetSource> datasets;
  std::vector<Mechanism> mechanisms = {Mechanism::scar, Mechanism::sar};
  std::vector<double> labeled_ratios = {0.25, 0.50, 0.75};
  std::vector<Estimator> estimators = {Estimator::upu, Estimator::nnpu,
                                       Estimator::ifpu};
  std::vector<double> prior_multipliers = {1.0};
  std::size_t repetitions = 10;
  std::uint64_t base_seed = 0;

  // trainer knobs shared by every run
  std::size_t max_epochs = 100;
  std::size_t batch_size = 128;
  double learning_rate = 1e-3;
  std::size_t hidden_width = 64;
  double gamma = 3.0;
  double train_fraction = 0.70;
  SarOptions sar;
  std::size_t threads = 1;
};

inline void check_experiment_config(const ExperimentConfig& cfg) {
  if (cfg.datasets.empty()) fail(Errc::empty_input, "no datasets configured");
  if (cfg.mechanisms.empty()) fail(Errc::empty_input, "no mechanisms");
  if (cfg.labeled_ratios.empty()) fail(Errc::empty_input, "no labeled ratios");
  if (cfg.estimators.empty()) fail(Errc::empty_input, "no estimators");
  if (cfg.prior_multipliers.empty()) fail(Errc::empty_input, "no multipliers");
  if (cfg.repetitions < 1)
    fail(Errc::invalid_argument, "repetitions must be >= 1");
  for (double r : cfg.labeled_ratios)
    if (!(r > 0.0 && r <= 1.0))
      fail(Errc::invalid_argument, "labeled ratio outside (0, 1]");
  for (double m : cfg.prior_multipliers)
    if (!(m > 0.0))
      fail(Errc::invalid_argument, "prior multiplier must be > 0");
  if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0))
    fail(Errc::invalid_argument, "train_fraction must lie in (0, 1)");
  for (std::size_t i = 0; i < cfg.datasets.size(); ++i)
    for (std::size_t j = i + 1; j < cfg.datasets.size(); ++j)
      if (cfg.datasets[i].name() == cfg.datasets[j].name())
        fail(Errc::invalid_argument,
             "duplicate dataset name: " + cfg.datasets[i].name());
}

inline std::size_t run_count(const ExperimentConfig& cfg) {
  return cfg.datasets.size() * cfg.mechanisms.size() *
         cfg.labeled_ratios.size() * cfg.estimators.size() *
         cfg.prior_multipliers.size() * cfg.repetitions;
}

struct RunRecord {
  std::string dataset;
  Mechanism mechanism = Mechanism::scar;
  double labeled_ratio = 0.0;
  Estimator estimator = Estimator::upu;
  double prior_multiplier = 1.0;
  std::size_t repetition = 0;

  std::uint64_t seed = 0;  // the train-stage seed
  double prior_used = 0.0;
  double roc = 0.0;
  double pr = 0.0;
  double rprec = 0.0;
  double clamp_rate = 0.0;
  double wall_seconds = 0.0;
  bool ok = false;
  std::string error;
};

// The 70/30 split and the labeling draw depend only on (dataset,
// mechanism, ratio, repetition), so every estimator and every prior
// multiplier is evaluated on the same PU realization: differences in a
// comparison column come from the risk estimator, not from resampling.
inline std::uint64_t data_stage_seed(std::uint64_t base,
                                     const std::string& dataset,
                                     Mechanism mechanism, double ratio,
                                     std::size_t rep) {
  std::uint64_t s = mix_seed(base, hash_str(dataset));
  s = mix_seed(s, static_cast<std::uint64_t>(mechanism));
  s = mix_seed(s, std::bit_cast<std::uint64_t>(ratio));
  s = mix_seed(s, rep);
  return s;
}

inline std::uint64_t train_stage_seed(std::uint64_t data_seed,
                                      Estimator estimator,
                                      double multiplier) {
  std::uint64_t s = mix_seed(data_seed, hash_str(estimator_name(estimator)));
  return mix_seed(s, std::bit_cast<std::uint64_t>(multiplier));
}

inline LabeledDataset materialize(const DatasetSource& src,
                                  std::uint64_t base_seed) {
  if (src.kind == DatasetSource::Kind::csv)
    return load_csv(src.csv_path, src.schema);
  return synth_gaussian(
      src.synth, mix_seed(base_seed, hash_str("dataset:" + src.synth.name)));
}

// One grid cell repetition: split, standardize, label, train, score, rate.
inline RunRecord run_one(const LabeledDataset& ds,
                         const ExperimentConfig& cfg, Mechanism mechanism,
                         double ratio, Estimator estimator, double multiplier,
                         std::size_t rep) {
  RunRecord rec;
  rec.dataset = ds.name;
  rec.mechanism = mechanism;
  rec.labeled_ratio = ratio;
  rec.estimator = estimator;
  rec.prior_multiplier = multiplier;
  rec.repetition = rep;

  const auto t0 = std::chrono::steady_clock::now();
  try {
    const std::uint64_t data_seed =
        data_stage_seed(cfg.base_seed, ds.name, mechanism, ratio, rep);
    rec.seed = train_stage_seed(data_seed, estimator, multiplier);

    SplitSpec split;
    split.train_fraction = cfg.train_fraction;
    split.labeled_ratio = ratio;
    split.mechanism = mechanism;
    split.seed = data_seed;
    auto [train_raw, test_raw] = train_test_split(ds, split);
    StandardizeResult std_pair = standardize(train_raw, test_raw);

    PUView pu = simulate_labels(std_pair.train, mechanism, ratio, data_seed,
                                cfg.sar);

    TrainConfig tc;
    tc.max_epochs = cfg.max_epochs;
    tc.batch_size = std::min(cfg.batch_size, pu.n_unlabeled());
    tc.learning_rate = cfg.learning_rate;
    tc.hidden_width = cfg.hidden_width;
    tc.seed = rec.seed;
    tc.estimator = estimator;
    tc.loss = default_loss_for(estimator, cfg.gamma);
    tc.prior =
        clamped_prior(multiplier * std_pair.train.positive_ratio());
    rec.prior_used = tc.prior.pi_p;

    auto [params, trace] = train(pu, tc);

    ScoredTruth st;
    st.scores = forward(params, std_pair.test.features);
    st.truth = std_pair.test.labels;
    rec.roc = roc_auc(st);
    rec.pr = pr_auc(st);
    rec.rprec = r_precision(st);

    std::size_t clamped = 0;
    for (const auto& r : trace.records) clamped += r.clamped ? 1 : 0;
    rec.clamp_rate = trace.records.empty()
                         ? 0.0
                         : static_cast<double>(clamped) /
                               static_cast<double>(trace.records.size());
    rec.ok = true;
  } catch (const std::exception& e) {
    rec.ok = false;
    rec.error = e.what();
  }
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rec;
}

namespace detail {

inline ExperimentConfig normalized(ExperimentConfig cfg) {
  auto sort_unique = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  sort_unique(cfg.labeled_ratios);
  sort_unique(cfg.prior_multipliers);
  return cfg;
}

struct Job {
  std::size_t dataset, mechanism, ratio, estimator, multiplier, rep;
};

}  // namespace detail

// Runs the whole grid. Output order is canonical (datasets and estimators
// in config order, ratios and multipliers ascending, repetitions last) and
// identical for serial and parallel execution: every run is a pure
// function of the config and its coordinates, written to its own slot.
inline std::vector<RunRecord> run_grid(const ExperimentConfig& config) {
  const ExperimentConfig cfg = detail::normalized(config);
  check_experiment_config(cfg);

  std::vector<LabeledDataset> data;
  data.reserve(cfg.datasets.size());
  for (const auto& src : cfg.datasets)
    data.push_back(materialize(src, cfg.base_seed));

  std::vector<detail::Job> jobs;
  jobs.reserve(run_count(cfg));
  for (std::size_t d = 0; d < cfg.datasets.size(); ++d)
    for (std::size_t m = 0; m < cfg.mechanisms.size(); ++m)
      for (std::size_t r = 0; r < cfg.labeled_ratios.size(); ++r)
        for (std::size_t e = 0; e < cfg.estimators.size(); ++e)
          for (std::size_t u = 0; u < cfg.prior_multipliers.size(); ++u)
            for (std::size_t k = 0; k < cfg.repetitions; ++k)
              jobs.push_back({d, m, r, e, u, k});

  std::vector<RunRecord> records(jobs.size());
  auto run_job = [&](std::size_t j) {
    const detail::Job& job = jobs[j];
    records[j] = run_one(data[job.dataset], cfg, cfg.mechanisms[job.mechanism],
                         cfg.labeled_ratios[job.ratio],
                         cfg.estimators[job.estimator],
                         cfg.prior_multipliers[job.multiplier], job.rep);
  };

  if (cfg.threads <= 1) {
    for (std::size_t j = 0; j < jobs.size(); ++j) run_job(j);
  } else {
    std::atomic<std::size_t> next{0};
    const std::size_t n_workers = std::min(cfg.threads, jobs.size());
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w)
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t j = next.fetch_add(1);
          if (j >= jobs.size()) return;
          run_job(j);
        }
      });
    for (auto& th : pool) th.join();
  }
  return records;
}

}  // namespace pulearn
