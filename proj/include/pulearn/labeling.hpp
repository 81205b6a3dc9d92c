#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <vector>

#include "pulearn/dataset.hpp"
#include "pulearn/error.hpp"
#include "pulearn/rng.hpp"

namespace pulearn {

namespace detail {

inline std::size_t labeled_count(const LabeledDataset& ds, double ratio) {
  if (!(ratio > 0.0 && ratio <= 1.0))
    fail(Errc::invalid_argument, "labeled ratio must lie in (0, 1]");
  const auto k = static_cast<std::size_t>(
      std::llround(ratio * static_cast<double>(ds.positive_count())));
  if (k == 0)
    fail(Errc::no_labeled_positives,
         "ratio rounds to zero labeled positives");
  return k;
}

// Assemble a PUView from the chosen positions within the positive list.
inline PUView assemble_view(const LabeledDataset& ds,
                            const std::vector<std::size_t>& pos_idx,
                            const std::vector<std::size_t>& chosen) {
  PUView view;
  view.base = ds;
  view.hidden_truth = ds.labels;
  std::vector<char> labeled(ds.n(), 0);
  for (std::size_t c : chosen) labeled[pos_idx[c]] = 1;
  for (std::size_t i = 0; i < ds.n(); ++i)
    (labeled[i] ? view.labeled_pos : view.unlabeled).push_back(i);
  check_puview(view);
  return view;
}

}  // namespace detail

// Selected-completely-at-random labeling: exactly round(ratio * n_P)
// positives, chosen uniformly without replacement, become the labeled set;
// everything else is unlabeled.
inline PUView scar_label(const LabeledDataset& ds, double ratio,
                         std::uint64_t seed) {
  check_dataset(ds);
  const std::size_t k = detail::labeled_count(ds, ratio);
  std::vector<std::size_t> pos_idx;
  for (std::size_t i = 0; i < ds.n(); ++i)
    if (ds.labels[i] == 1) pos_idx.push_back(i);
  Rng rng(mix_seed(seed, hash_str("scar")));
  auto chosen = rng.sample_without_replacement(pos_idx.size(), k);
  return detail::assemble_view(ds, pos_idx, chosen);
}

struct SarOptions {
  double exponent = 1.0;  // labeling weight is distance^exponent
  bool standardized_distances = true;  // false: raw feature space
};

// Selected-at-random labeling biased by feature-space position: positives
// far from the negative cloud are more likely to be labeled. Weight of
// positive i is (mean Euclidean distance to all negatives)^exponent,
// with distances measured on standardized features by default.
inline PUView sar_label(const LabeledDataset& ds, double ratio,
                        std::uint64_t seed, const SarOptions& opts = {}) {
  check_dataset(ds);
  const std::size_t k = detail::labeled_count(ds, ratio);

  std::vector<std::size_t> pos_idx, neg_idx;
  for (std::size_t i = 0; i < ds.n(); ++i)
    (ds.labels[i] == 1 ? pos_idx : neg_idx).push_back(i);

  Matrix feats = ds.features;
  if (opts.standardized_distances) apply_stats(feats, column_stats(feats));

  const std::size_t d = feats.cols;
  std::vector<double> weights(pos_idx.size(), 0.0);
  bool any_positive_weight = false;
  for (std::size_t p = 0; p < pos_idx.size(); ++p) {
    const double* xp = feats.data.data() + pos_idx[p] * d;
    double acc = 0.0;
    for (std::size_t q : neg_idx) {
      const double* xn = feats.data.data() + q * d;
      double sq = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        const double dlt = xp[c] - xn[c];
        sq += dlt * dlt;
      }
      acc += std::sqrt(sq);
    }
    const double mean_dist = acc / static_cast<double>(neg_idx.size());
    weights[p] = std::pow(mean_dist, opts.exponent);
    if (weights[p] > 0.0) any_positive_weight = true;
  }

  if (!any_positive_weight) {
    std::cerr << "[pulearn] sar_label: all distance weights are zero on '"
              << ds.name << "', falling back to uniform labeling\n";
    return scar_label(ds, ratio, seed);
  }

  Rng rng(mix_seed(seed, hash_str("sar")));
  auto chosen = rng.weighted_sample_without_replacement(weights, k);
  return detail::assemble_view(ds, pos_idx, chosen);
}

inline PUView simulate_labels(const LabeledDataset& ds, Mechanism mechanism,
                              double ratio, std::uint64_t seed,
                              const SarOptions& opts = {}) {
  return mechanism == Mechanism::scar ? scar_label(ds, ratio, seed)
                                      : sar_label(ds, ratio, seed, opts);
}

}  // namespace pulearn
