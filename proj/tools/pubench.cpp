// pubench: benchmark and utility driver for the pulearn library.
//
// Subcommands:
//   bench        run an estimator grid and write a summary report
//   sensitivity  prior-multiplier sweep for the focused estimator
//   train        fit one scorer and save a model snapshot
//   gradcheck    finite-difference audit of the risk gradients
//   simulate     materialize a dataset, apply a labeling mechanism, dump CSV

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pulearn/pulearn.hpp"

namespace {

using namespace pulearn;

struct BenchCli {
  std::string config_path;
  std::vector<std::string> datasets;
  std::string mechanisms, ratios, estimators, multipliers, sar_space, format;
  std::string out, runs_out, catalog;
  std::size_t reps = 0, epochs = 0, batch_size = 0, hidden = 0, threads = 0;
  std::uint64_t seed = 0;
  double lr = 0.0, gamma = 0.0, train_fraction = 0.0, sar_exponent = 0.0;
  bool csv_header = false;
  int label_column = -1;
  bool dry_run = false;
};

void add_bench_options(CLI::App* cmd, BenchCli& c) {
  cmd->add_option("-c,--config", c.config_path,
                  "settings file (key = value lines)");
  cmd->add_option("--dataset", c.datasets,
                  "dataset source, repeatable: CSV path or synth:k=v,...");
  cmd->add_option("--mechanisms", c.mechanisms, "comma list: scar,sar");
  cmd->add_option("--ratios", c.ratios, "comma list of labeled ratios");
  cmd->add_option("--estimators", c.estimators, "comma list: upu,nnpu,ifpu");
  cmd->add_option("--multipliers", c.multipliers,
                  "comma list of prior multipliers");
  cmd->add_option("--reps", c.reps, "repetitions per grid cell");
  cmd->add_option("--seed", c.seed, "base seed");
  cmd->add_option("--epochs", c.epochs, "training epochs");
  cmd->add_option("--batch-size", c.batch_size, "unlabeled minibatch size");
  cmd->add_option("--lr", c.lr, "learning rate");
  cmd->add_option("--hidden", c.hidden, "hidden layer width");
  cmd->add_option("--gamma", c.gamma, "focusing strength");
  cmd->add_option("--train-fraction", c.train_fraction,
                  "train split fraction");
  cmd->add_option("--sar-exponent", c.sar_exponent,
                  "selection bias strength");
  cmd->add_option("--sar-space", c.sar_space,
                  "distance space: standardized or raw");
  cmd->add_option("--threads", c.threads, "worker threads (1 = serial)");
  cmd->add_option("-o,--out", c.out, "summary report path");
  cmd->add_option("--runs-out", c.runs_out, "per-run records CSV path");
  cmd->add_option("--format", c.format, "report format: csv, json, markdown");
  cmd->add_option("--catalog", c.catalog, "dataset catalog CSV to validate");
  cmd->add_flag("--csv-header", c.csv_header,
                "CSV datasets start with a header row");
  cmd->add_option("--label-column", c.label_column,
                  "label column index (-1 = last)");
  cmd->add_flag("--dry-run", c.dry_run, "print the run plan and exit");
}

// Config file first, explicit flags on top.
BenchSettings resolve_settings(const CLI::App* cmd, const BenchCli& c,
                               BenchSettings s = {}) {
  if (!c.config_path.empty()) load_settings_file(s, c.config_path);
  const auto given = [&](const std::string& name) {
    return cmd->count(name) > 0;
  };
  if (given("--dataset"))
    for (const auto& d : c.datasets) apply_setting(s, "dataset", d);
  if (given("--mechanisms")) apply_setting(s, "mechanisms", c.mechanisms);
  if (given("--ratios")) apply_setting(s, "ratios", c.ratios);
  if (given("--estimators")) apply_setting(s, "estimators", c.estimators);
  if (given("--multipliers")) apply_setting(s, "multipliers", c.multipliers);
  if (given("--reps")) s.experiment.repetitions = c.reps;
  if (given("--seed")) s.experiment.base_seed = c.seed;
  if (given("--epochs")) s.experiment.max_epochs = c.epochs;
  if (given("--batch-size")) s.experiment.batch_size = c.batch_size;
  if (given("--lr")) s.experiment.learning_rate = c.lr;
  if (given("--hidden")) s.experiment.hidden_width = c.hidden;
  if (given("--gamma")) s.experiment.gamma = c.gamma;
  if (given("--train-fraction")) s.experiment.train_fraction = c.train_fraction;
  if (given("--sar-exponent")) s.experiment.sar.exponent = c.sar_exponent;
  if (given("--sar-space")) apply_setting(s, "sar_space", c.sar_space);
  if (given("--threads")) s.experiment.threads = c.threads;
  if (given("--out")) s.report_path = c.out;
  if (given("--runs-out")) s.runs_path = c.runs_out;
  if (given("--format")) s.format = c.format;
  if (given("--catalog")) s.catalog_path = c.catalog;
  if (given("--csv-header")) s.schema.has_header = true;
  if (given("--label-column")) s.schema.label_column = c.label_column;
  finalize_datasets(s);
  return s;
}

void print_plan(const ExperimentConfig& e) {
  std::printf("planned runs: %zu\n", run_count(e));
  std::printf("  datasets:    %zu\n", e.datasets.size());
  std::printf("  mechanisms:  %zu\n", e.mechanisms.size());
  std::printf("  ratios:      %zu\n", e.labeled_ratios.size());
  std::printf("  estimators:  %zu\n", e.estimators.size());
  std::printf("  multipliers: %zu\n", e.prior_multipliers.size());
  std::printf("  repetitions: %zu\n", e.repetitions);
}

int validate_catalog(const BenchSettings& s) {
  if (s.catalog_path.empty()) return 0;
  const auto catalog = load_catalog(s.catalog_path);
  int bad = 0;
  for (const auto& src : s.experiment.datasets) {
    const LabeledDataset ds = materialize(src, s.experiment.base_seed);
    const CatalogCheck chk = validate_against_catalog(ds, catalog);
    if (!chk.all_ok()) {
      ++bad;
      std::cerr << "catalog mismatch: " << chk.describe() << "\n";
    }
  }
  return bad;
}

int write_outputs(const BenchSettings& s, const std::vector<RunRecord>& records) {
  if (!s.runs_path.empty()) write_run_records_csv(records, s.runs_path);
  const Summary summary = aggregate(records);
  emit_report(summary, parse_report_format(s.format), s.report_path);
  std::size_t failed = 0;
  for (const auto& r : records)
    if (!r.ok) {
      ++failed;
      std::cerr << "run failed: " << r.dataset << "/"
                << mechanism_name(r.mechanism) << " ratio=" << r.labeled_ratio
                << " " << estimator_name(r.estimator)
                << " mult=" << r.prior_multiplier << " rep=" << r.repetition
                << ": " << r.error << "\n";
    }
  std::printf("%zu/%zu runs ok, summary written to %s\n",
              records.size() - failed, records.size(), s.report_path.c_str());
  return failed == 0 ? 0 : 1;
}

int run_bench(const CLI::App* cmd, const BenchCli& c, bool focused_only) {
  BenchSettings base;
  if (focused_only) {
    base.experiment.estimators = {Estimator::ifpu};
    base.experiment.prior_multipliers = {0.25, 0.5, 1.0, 1.5, 2.0};
  }
  BenchSettings s = resolve_settings(cmd, c, base);
  if (focused_only) {
    bool has_focused = false;
    for (Estimator e : s.experiment.estimators)
      if (e == Estimator::ifpu) has_focused = true;
    if (!has_focused)
      fail(Errc::invalid_argument,
           "sensitivity sweep needs the focused estimator in the mix");
  }
  check_experiment_config(s.experiment);
  if (c.dry_run) {
    print_plan(s.experiment);
    return 0;
  }
  if (validate_catalog(s) > 0) return 1;
  return write_outputs(s, run_grid(s.experiment));
}

struct TrainCli {
  std::string data, mechanism = "scar", estimator = "ifpu", out = "model.bin";
  std::string sar_space = "standardized";
  double ratio = 0.5, multiplier = 1.0, lr = 1e-3, gamma = 3.0;
  double train_fraction = 0.7, sar_exponent = 1.0;
  std::size_t epochs = 100, batch_size = 128, hidden = 64;
  std::uint64_t seed = 0;
  bool csv_header = false;
  int label_column = -1;
};

int run_train(const TrainCli& c) {
  CsvSchema schema;
  schema.has_header = c.csv_header;
  schema.label_column = c.label_column;
  const DatasetSource src = parse_dataset_source(c.data, schema);

  ExperimentConfig e;
  e.base_seed = c.seed;
  e.max_epochs = c.epochs;
  e.batch_size = c.batch_size;
  e.learning_rate = c.lr;
  e.hidden_width = c.hidden;
  e.gamma = c.gamma;
  e.train_fraction = c.train_fraction;
  e.sar.exponent = c.sar_exponent;
  e.sar.standardized_distances = c.sar_space != "raw";

  const LabeledDataset ds = materialize(src, c.seed);
  const Mechanism mech = parse_mechanism(c.mechanism);
  const Estimator est = parse_estimator(c.estimator);
  const std::uint64_t data_seed =
      data_stage_seed(c.seed, ds.name, mech, c.ratio, 0);

  SplitSpec split;
  split.train_fraction = c.train_fraction;
  split.labeled_ratio = c.ratio;
  split.mechanism = mech;
  split.seed = data_seed;
  auto [train_raw, test_raw] = train_test_split(ds, split);
  StandardizeResult std_pair = standardize(train_raw, test_raw);
  PUView pu = simulate_labels(std_pair.train, mech, c.ratio, data_seed, e.sar);

  TrainConfig tc;
  tc.max_epochs = c.epochs;
  tc.batch_size = std::min(c.batch_size, pu.n_unlabeled());
  tc.learning_rate = c.lr;
  tc.hidden_width = c.hidden;
  tc.seed = train_stage_seed(data_seed, est, c.multiplier);
  tc.estimator = est;
  tc.loss = default_loss_for(est, c.gamma);
  tc.prior = clamped_prior(c.multiplier * std_pair.train.positive_ratio());

  auto [params, trace] = train(pu, tc);

  ScoredTruth st;
  st.scores = forward(params, std_pair.test.features);
  st.truth = std_pair.test.labels;
  std::printf("dataset %s: %zu train (%zu labeled, %zu unlabeled), %zu test\n",
              ds.name.c_str(), std_pair.train.n(), pu.n_labeled(),
              pu.n_unlabeled(), std_pair.test.n());
  std::printf("prior used: %.6f\n", tc.prior.pi_p);
  std::printf("test roc_auc=%.4f pr_auc=%.4f r_precision=%.4f\n", roc_auc(st),
              pr_auc(st), r_precision(st));

  ModelSnapshot snap;
  snap.params = params;
  snap.seed = tc.seed;
  snap.estimator = est;
  snap.gamma = c.gamma;
  save_model(snap, c.out);
  std::printf("model written to %s\n", c.out.c_str());
  return 0;
}

struct GradCheckCli {
  std::size_t trials = 200;
  std::uint64_t seed = 0;
  double tolerance = 1e-5, fd_step = 1e-6;
  std::string gammas;
};

int run_gradcheck(const GradCheckCli& c) {
  GradCheckConfig cfg;
  cfg.trials = c.trials;
  cfg.seed = c.seed;
  cfg.tolerance = c.tolerance;
  cfg.fd_step = c.fd_step;
  if (!c.gammas.empty()) cfg.gammas = parse_double_list(c.gammas, "gammas");
  const GradCheckReport report = grad_check(cfg);
  std::cout << report.describe() << "\n";
  return report.pass ? 0 : 1;
}

struct SimulateCli {
  std::string data, mechanism = "scar", out = "puview.csv";
  std::string sar_space = "standardized";
  double ratio = 0.5, sar_exponent = 1.0;
  std::uint64_t seed = 0;
  bool standardize_features = false;
  bool csv_header = false;
  int label_column = -1;
};

int run_simulate(const SimulateCli& c) {
  CsvSchema schema;
  schema.has_header = c.csv_header;
  schema.label_column = c.label_column;
  const DatasetSource src = parse_dataset_source(c.data, schema);
  LabeledDataset ds = materialize(src, c.seed);
  if (c.standardize_features) {
    const auto stats = column_stats(ds.features);
    apply_stats(ds.features, stats);
  }
  SarOptions sar;
  sar.exponent = c.sar_exponent;
  sar.standardized_distances = c.sar_space != "raw";
  const Mechanism mech = parse_mechanism(c.mechanism);
  const PUView view = simulate_labels(ds, mech, c.ratio, c.seed, sar);
  write_puview_csv(view, c.out);
  std::printf("%s: %zu rows (%zu labeled positive, %zu unlabeled) -> %s\n",
              ds.name.c_str(), view.base.n(), view.n_labeled(),
              view.n_unlabeled(), c.out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"positive-unlabeled learning benchmark driver"};
  app.require_subcommand(1);

  BenchCli bench_cli;
  CLI::App* bench = app.add_subcommand("bench", "run an estimator grid");
  add_bench_options(bench, bench_cli);

  BenchCli sens_cli;
  CLI::App* sens = app.add_subcommand(
      "sensitivity", "prior multiplier sweep for the focused estimator");
  add_bench_options(sens, sens_cli);

  TrainCli train_cli;
  CLI::App* train_cmd =
      app.add_subcommand("train", "fit one scorer and save a snapshot");
  train_cmd->add_option("--data", train_cli.data, "dataset source")
      ->required();
  train_cmd->add_option("--mechanism", train_cli.mechanism, "scar or sar");
  train_cmd->add_option("--ratio", train_cli.ratio, "labeled ratio");
  train_cmd->add_option("--estimator", train_cli.estimator,
                        "upu, nnpu, or ifpu");
  train_cmd->add_option("--multiplier", train_cli.multiplier,
                        "prior multiplier");
  train_cmd->add_option("--seed", train_cli.seed, "base seed");
  train_cmd->add_option("--epochs", train_cli.epochs, "training epochs");
  train_cmd->add_option("--batch-size", train_cli.batch_size,
                        "unlabeled minibatch size");
  train_cmd->add_option("--lr", train_cli.lr, "learning rate");
  train_cmd->add_option("--hidden", train_cli.hidden, "hidden layer width");
  train_cmd->add_option("--gamma", train_cli.gamma, "focusing strength");
  train_cmd->add_option("--train-fraction", train_cli.train_fraction,
                        "train split fraction");
  train_cmd->add_option("--sar-exponent", train_cli.sar_exponent,
                        "selection bias strength");
  train_cmd->add_option("--sar-space", train_cli.sar_space,
                        "distance space: standardized or raw");
  train_cmd->add_option("-o,--out", train_cli.out, "model snapshot path");
  train_cmd->add_flag("--csv-header", train_cli.csv_header,
                      "CSV dataset starts with a header row");
  train_cmd->add_option("--label-column", train_cli.label_column,
                        "label column index (-1 = last)");

  GradCheckCli grad_cli;
  CLI::App* grad =
      app.add_subcommand("gradcheck", "finite-difference gradient audit");
  grad->add_option("--trials", grad_cli.trials, "number of random draws");
  grad->add_option("--seed", grad_cli.seed, "base seed");
  grad->add_option("--tolerance", grad_cli.tolerance,
                   "max relative error allowed");
  grad->add_option("--fd-step", grad_cli.fd_step, "central difference step");
  grad->add_option("--gammas", grad_cli.gammas,
                   "comma list of focusing strengths to draw from");

  SimulateCli sim_cli;
  CLI::App* sim = app.add_subcommand(
      "simulate", "label a dataset and write the positive-unlabeled view");
  sim->add_option("--data", sim_cli.data, "dataset source")->required();
  sim->add_option("--mechanism", sim_cli.mechanism, "scar or sar");
  sim->add_option("--ratio", sim_cli.ratio, "labeled ratio");
  sim->add_option("--seed", sim_cli.seed, "labeling seed");
  sim->add_option("--sar-exponent", sim_cli.sar_exponent,
                  "selection bias strength");
  sim->add_option("--sar-space", sim_cli.sar_space,
                  "distance space: standardized or raw");
  sim->add_flag("--standardize", sim_cli.standardize_features,
                "standardize features before labeling and output");
  sim->add_option("-o,--out", sim_cli.out, "output CSV path");
  sim->add_flag("--csv-header", sim_cli.csv_header,
                "CSV dataset starts with a header row");
  sim->add_option("--label-column", sim_cli.label_column,
                  "label column index (-1 = last)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (bench->parsed()) return run_bench(bench, bench_cli, false);
    if (sens->parsed()) return run_bench(sens, sens_cli, true);
    if (train_cmd->parsed()) return run_train(train_cli);
    if (grad->parsed()) return run_gradcheck(grad_cli);
    if (sim->parsed()) return run_simulate(sim_cli);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
