#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "pulearn/dataset.hpp"
#include "pulearn/error.hpp"
#include "pulearn/rng.hpp"

namespace pulearn {

// Two isotropic Gaussian clusters plus an optional "overlap" subpopulation
// of positives sitting part-way toward the negative mean, so that some
// positives genuinely resemble negatives.
struct GaussianMixtureSpec {
  std::string name = "synth";
  std::size_t n = 1000;
  std::size_t d = 2;
  double positive_ratio = 0.10;
  std::vector<double> pos_mean;  // empty: separation/sqrt(d) per coordinate
  std::vector<double> neg_mean;  // empty: origin
  double pos_sigma = 1.0;
  double neg_sigma = 1.0;
  double separation = 3.0;  // Euclidean distance used for the default means
  double overlap_fraction = 0.0;  // share of positives drawn shifted
  double overlap_shift = 0.25;    // their mean: neg + shift * (pos - neg)
};

inline LabeledDataset synth_gaussian(const GaussianMixtureSpec& spec,
                                     std::uint64_t seed) {
  if (spec.n < 2 || spec.d < 1)
    fail(Errc::invalid_argument, "mixture needs n >= 2 and d >= 1");
  if (!(spec.positive_ratio > 0.0 && spec.positive_ratio < 1.0))
    fail(Errc::invalid_argument, "positive_ratio must lie in (0, 1)");
  if (!(spec.overlap_fraction >= 0.0 && spec.overlap_fraction <= 1.0))
    fail(Errc::invalid_argument, "overlap_fraction must lie in [0, 1]");
  const auto n_pos = static_cast<std::size_t>(
      std::llround(spec.positive_ratio * static_cast<double>(spec.n)));
  if (n_pos == 0)
    fail(Errc::invalid_argument, "ratio rounds to zero positives");
  if (n_pos >= spec.n)
    fail(Errc::invalid_argument, "ratio rounds to zero negatives");
  const std::size_t n_neg = spec.n - n_pos;

  std::vector<double> mu_n = spec.neg_mean;
  if (mu_n.empty()) mu_n.assign(spec.d, 0.0);
  std::vector<double> mu_p = spec.pos_mean;
  if (mu_p.empty()) {
    const double coord = spec.separation / std::sqrt(
        static_cast<double>(spec.d));
    mu_p.assign(spec.d, coord);
    for (std::size_t c = 0; c < spec.d; ++c) mu_p[c] += mu_n[c];
  }
  if (mu_p.size() != spec.d || mu_n.size() != spec.d)
    fail(Errc::dimension_mismatch, "mean vectors must have length d");

  std::vector<double> mu_o(spec.d);
  for (std::size_t c = 0; c < spec.d; ++c)
    mu_o[c] = mu_n[c] + spec.overlap_shift * (mu_p[c] - mu_n[c]);
  const auto n_overlap = static_cast<std::size_t>(
      std::llround(spec.overlap_fraction * static_cast<double>(n_pos)));

  LabeledDataset ds;
  ds.name = spec.name;
  ds.features = Matrix(spec.n, spec.d);
  ds.labels.assign(spec.n, -1);

  Rng rng(mix_seed(seed, hash_str("synth_gaussian")));
  std::size_t row = 0;
  auto emit = [&](const std::vector<double>& mu, double sigma, int label,
                  std::size_t count) {
    for (std::size_t i = 0; i < count; ++i, ++row) {
      double* x = ds.features.row(row);
      for (std::size_t c = 0; c < spec.d; ++c)
        x[c] = mu[c] + sigma * rng.normal();
      ds.labels[row] = label;
    }
  };
  emit(mu_p, spec.pos_sigma, 1, n_pos - n_overlap);
  emit(mu_o, spec.pos_sigma, 1, n_overlap);
  emit(mu_n, spec.neg_sigma, -1, n_neg);

  check_dataset(ds);
  return ds;
}

}  // namespace pulearn
