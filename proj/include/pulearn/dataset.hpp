#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "pulearn/error.hpp"
#include "pulearn/matrix.hpp"
#include "pulearn/prior.hpp"
#include "pulearn/rng.hpp"

namespace pulearn {

// Fully labeled PN data, the simulation ground truth.
struct LabeledDataset {
  std::string name;
  Matrix features;          // n x d
  std::vector<int> labels;  // +1 / -1 per row

  std::size_t n() const { return features.rows; }
  std::size_t d() const { return features.cols; }
  std::size_t positive_count() const {
    return static_cast<std::size_t>(
        std::count(labels.begin(), labels.end(), 1));
  }
  double positive_ratio() const {
    return static_cast<double>(positive_count()) / static_cast<double>(n());
  }
};

inline void check_dataset(const LabeledDataset& ds) {
  if (ds.features.rows < 2) fail(Errc::empty_input, "need at least 2 rows");
  if (ds.features.cols < 1) fail(Errc::empty_input, "need at least 1 feature");
  if (ds.labels.size() != ds.features.rows)
    fail(Errc::dimension_mismatch, "label count != row count");
  for (double v : ds.features.data)
    if (!std::isfinite(v))
      fail(Errc::non_numeric_cell, "non-finite feature value");
  std::size_t pos = 0, neg = 0;
  for (int y : ds.labels) {
    if (y == 1) ++pos;
    else if (y == -1) ++neg;
    else fail(Errc::invalid_label, "label must be +1 or -1");
  }
  if (pos == 0 || neg == 0)
    fail(Errc::single_class, "both classes must occur");
}

inline LabeledDataset make_dataset(std::string name, Matrix features,
                                   std::vector<int> labels) {
  LabeledDataset ds{std::move(name), std::move(features), std::move(labels)};
  check_dataset(ds);
  return ds;
}

// A PN dataset seen through the PU lens: labeled-positive indices L and
// unlabeled indices U partition the base rows. hidden_truth keeps the
// original labels for the evaluation stage only; training code must touch
// nothing but base.features, labeled_pos and unlabeled.
struct PUView {
  LabeledDataset base;
  std::vector<std::size_t> labeled_pos;  // L, sorted ascending
  std::vector<std::size_t> unlabeled;    // U, sorted ascending
  std::vector<int> hidden_truth;         // evaluation only

  std::size_t n_labeled() const { return labeled_pos.size(); }
  std::size_t n_unlabeled() const { return unlabeled.size(); }
};

inline void check_puview(const PUView& v) {
  const std::size_t n = v.base.n();
  if (v.labeled_pos.empty())
    fail(Errc::no_labeled_positives, "L must be nonempty");
  if (v.unlabeled.empty()) fail(Errc::empty_input, "U must be nonempty");
  if (v.hidden_truth.size() != n)
    fail(Errc::dimension_mismatch, "hidden_truth size != n");
  std::vector<char> seen(n, 0);
  for (std::size_t i : v.labeled_pos) {
    if (i >= n) fail(Errc::invalid_argument, "L index out of range");
    if (seen[i]++) fail(Errc::invalid_argument, "duplicate index in L");
    if (v.hidden_truth[i] != 1)
      fail(Errc::invalid_label, "labeled example is not a true positive");
  }
  for (std::size_t i : v.unlabeled) {
    if (i >= n) fail(Errc::invalid_argument, "U index out of range");
    if (seen[i]++) fail(Errc::invalid_argument, "index in both L and U");
  }
  if (v.labeled_pos.size() + v.unlabeled.size() != n)
    fail(Errc::invalid_argument, "L and U do not cover all rows");
}

enum class Mechanism { scar, sar };

inline const char* mechanism_name(Mechanism m) {
  return m == Mechanism::scar ? "scar" : "sar";
}

inline Mechanism parse_mechanism(std::string_view s) {
  if (s == "scar" || s == "SCAR") return Mechanism::scar;
  if (s == "sar" || s == "SAR") return Mechanism::sar;
  fail(Errc::invalid_argument, "unknown mechanism: " + std::string(s));
}

struct SplitSpec {
  double train_fraction = 0.70;
  double labeled_ratio = 0.50;
  Mechanism mechanism = Mechanism::scar;
  std::uint64_t seed = 0;
};

// Column means and population standard deviations of the train split,
// i.e. the affine map that was applied to both splits.
struct FeatureStats {
  std::vector<double> mean;
  std::vector<double> stddev;  // 0 marks a constant column (mapped to 0)
};

struct StandardizeResult {
  LabeledDataset train;
  LabeledDataset test;
  FeatureStats stats;
};

inline FeatureStats column_stats(const Matrix& m) {
  FeatureStats st;
  st.mean.assign(m.cols, 0.0);
  st.stddev.assign(m.cols, 0.0);
  if (m.rows == 0) return st;
  const double inv_n = 1.0 / static_cast<double>(m.rows);
  for (std::size_t r = 0; r < m.rows; ++r) {
    const double* row = m.data.data() + r * m.cols;
    for (std::size_t c = 0; c < m.cols; ++c) st.mean[c] += row[c];
  }
  for (std::size_t c = 0; c < m.cols; ++c) st.mean[c] *= inv_n;
  for (std::size_t r = 0; r < m.rows; ++r) {
    const double* row = m.data.data() + r * m.cols;
    for (std::size_t c = 0; c < m.cols; ++c) {
      const double dlt = row[c] - st.mean[c];
      st.stddev[c] += dlt * dlt;
    }
  }
  for (std::size_t c = 0; c < m.cols; ++c)
    st.stddev[c] = std::sqrt(st.stddev[c] * inv_n);
  return st;
}

inline void apply_stats(Matrix& m, const FeatureStats& st) {
  if (st.mean.size() != m.cols)
    fail(Errc::dimension_mismatch, "stats width != feature width");
  for (std::size_t r = 0; r < m.rows; ++r) {
    double* row = m.data.data() + r * m.cols;
    for (std::size_t c = 0; c < m.cols; ++c)
      row[c] = st.stddev[c] > 0.0 ? (row[c] - st.mean[c]) / st.stddev[c] : 0.0;
  }
}

// Fit mean/std on train only, apply the same map to both splits.
inline StandardizeResult standardize(const LabeledDataset& train,
                                     const LabeledDataset& test) {
  if (train.d() != test.d())
    fail(Errc::dimension_mismatch, "train/test feature width differs");
  StandardizeResult out{train, test, column_stats(train.features)};
  apply_stats(out.train.features, out.stats);
  apply_stats(out.test.features, out.stats);
  return out;
}

inline LabeledDataset subset_rows(const LabeledDataset& ds,
                                  const std::vector<std::size_t>& idx) {
  LabeledDataset out;
  out.name = ds.name;
  out.features = ds.features.gather_rows(idx);
  out.labels.reserve(idx.size());
  for (std::size_t i : idx) out.labels.push_back(ds.labels[i]);
  return out;
}

// Stratified random split. Per-class train counts follow
// largest-remainder rounding of train_fraction * n_total (ties resolved
// positive class first), then each class is clamped to keep at least one
// member on each side.
inline std::pair<LabeledDataset, LabeledDataset> train_test_split(
    const LabeledDataset& ds, const SplitSpec& spec) {
  check_dataset(ds);
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
    fail(Errc::invalid_argument, "train_fraction must lie in (0, 1)");

  std::vector<std::size_t> pos_idx, neg_idx;
  for (std::size_t i = 0; i < ds.n(); ++i)
    (ds.labels[i] == 1 ? pos_idx : neg_idx).push_back(i);
  if (pos_idx.size() < 2 || neg_idx.size() < 2)
    fail(Errc::too_small_to_stratify,
         "need at least 2 examples of each class to split");

  const auto total_train = static_cast<std::size_t>(
      std::llround(spec.train_fraction * static_cast<double>(ds.n())));
  const double exact_pos =
      spec.train_fraction * static_cast<double>(pos_idx.size());
  const double exact_neg =
      spec.train_fraction * static_cast<double>(neg_idx.size());
  std::size_t k_pos = static_cast<std::size_t>(std::floor(exact_pos));
  std::size_t k_neg = static_cast<std::size_t>(std::floor(exact_neg));
  const double rem_pos = exact_pos - static_cast<double>(k_pos);
  const double rem_neg = exact_neg - static_cast<double>(k_neg);
  std::size_t leftover = total_train > k_pos + k_neg
                             ? total_train - (k_pos + k_neg)
                             : 0;
  while (leftover-- > 0) {
    if (rem_pos >= rem_neg && k_pos < pos_idx.size()) ++k_pos;
    else ++k_neg;
  }
  k_pos = std::clamp<std::size_t>(k_pos, 1, pos_idx.size() - 1);
  k_neg = std::clamp<std::size_t>(k_neg, 1, neg_idx.size() - 1);

  Rng rng(mix_seed(spec.seed, hash_str("train_test_split")));
  rng.shuffle(pos_idx);
  rng.shuffle(neg_idx);

  std::vector<std::size_t> train_idx(pos_idx.begin(), pos_idx.begin() + k_pos);
  train_idx.insert(train_idx.end(), neg_idx.begin(), neg_idx.begin() + k_neg);
  std::vector<std::size_t> test_idx(pos_idx.begin() + k_pos, pos_idx.end());
  test_idx.insert(test_idx.end(), neg_idx.begin() + k_neg, neg_idx.end());
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());
  return {subset_rows(ds, train_idx), subset_rows(ds, test_idx)};
}

}  // namespace pulearn
