#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "pulearn/error.hpp"

namespace pulearn {

struct ScoredTruth {
  std::vector<double> scores;
  std::vector<int> truth;  // +1 / -1
};

namespace detail {

inline void check_scored(const ScoredTruth& st) {
  if (st.scores.empty()) fail(Errc::empty_input, "no scored examples");
  if (st.scores.size() != st.truth.size())
    fail(Errc::dimension_mismatch, "scores and truth differ in length");
  for (int y : st.truth)
    if (y != 1 && y != -1)
      fail(Errc::invalid_label, "truth must be +1 or -1");
}

inline std::size_t positive_count(const ScoredTruth& st) {
  return static_cast<std::size_t>(
      std::count(st.truth.begin(), st.truth.end(), 1));
}

// Indices in evaluation order: score descending, original index ascending.
// This is the documented deterministic tie order for PR-AUC/R-precision.
inline std::vector<std::size_t> eval_order(const ScoredTruth& st) {
  std::vector<std::size_t> idx(st.scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (st.scores[a] != st.scores[b]) return st.scores[a] > st.scores[b];
    return a < b;
  });
  return idx;
}

}  // namespace detail

// Probability that a random positive outscores a random negative, with
// half credit for ties (the rank-statistic form of the ROC area).
inline double roc_auc(const ScoredTruth& st) {
  detail::check_scored(st);
  const std::size_t n = st.scores.size();
  const std::size_t n_pos = detail::positive_count(st);
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0)
    fail(Errc::single_class, "ROC area needs both classes");

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return st.scores[a] < st.scores[b];
  });

  double pos_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && st.scores[idx[j + 1]] == st.scores[idx[i]]) ++j;
    // ranks are 1-based; a tie group spanning [i, j] shares the mean rank
    const double avg_rank = 0.5 * (static_cast<double>(i + 1) +
                                   static_cast<double>(j + 1));
    for (std::size_t k = i; k <= j; ++k)
      if (st.truth[idx[k]] == 1) pos_rank_sum += avg_rank;
    i = j + 1;
  }
  const double np = static_cast<double>(n_pos);
  const double nn = static_cast<double>(n_neg);
  return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

// Average precision: mean over positives, in evaluation order, of the
// precision at that positive's rank.
inline double pr_auc(const ScoredTruth& st) {
  detail::check_scored(st);
  const std::size_t n_pos = detail::positive_count(st);
  if (n_pos == 0) fail(Errc::single_class, "no positive examples");
  const auto order = detail::eval_order(st);
  double ap = 0.0;
  std::size_t hits = 0;
  for (std::size_t r = 0; r < order.size(); ++r) {
    if (st.truth[order[r]] == 1) {
      ++hits;
      ap += static_cast<double>(hits) / static_cast<double>(r + 1);
    }
  }
  return ap / static_cast<double>(n_pos);
}

// Fraction of true positives among the k top-scored examples, where k is
// the number of true positives.
inline double r_precision(const ScoredTruth& st) {
  detail::check_scored(st);
  const std::size_t k = detail::positive_count(st);
  if (k == 0) fail(Errc::single_class, "no positive examples");
  const auto order = detail::eval_order(st);
  std::size_t hits = 0;
  for (std::size_t r = 0; r < k; ++r)
    if (st.truth[order[r]] == 1) ++hits;
  return static_cast<double>(hits) / static_cast<double>(k);
}

struct MetricTriple {
  double roc = 0.0;
  double pr = 0.0;
  double rprec = 0.0;
};

// Brute-force reference: O(n^2) pair counting for the ROC area and a
// literal positional rank walk (no sort) for the other two. Test use only.
inline MetricTriple metric_oracle(const ScoredTruth& st) {
  detail::check_scored(st);
  const std::size_t n = st.scores.size();
  if (n > 1000)
    fail(Errc::invalid_argument, "oracle is quadratic; n must be <= 1000");
  const std::size_t n_pos = detail::positive_count(st);
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0)
    fail(Errc::single_class, "oracle needs both classes");

  MetricTriple out;
  double wins = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    if (st.truth[p] != 1) continue;
    for (std::size_t q = 0; q < n; ++q) {
      if (st.truth[q] != -1) continue;
      if (st.scores[p] > st.scores[q]) wins += 1.0;
      else if (st.scores[p] == st.scores[q]) wins += 0.5;
    }
  }
  out.roc = wins / (static_cast<double>(n_pos) * static_cast<double>(n_neg));

  // 1-based rank of each element under (score desc, index asc)
  std::vector<std::size_t> rank(n, 1);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (b == a) continue;
      if (st.scores[b] > st.scores[a] ||
          (st.scores[b] == st.scores[a] && b < a))
        ++rank[a];
    }

  double ap = 0.0;
  std::size_t rprec_hits = 0;
  for (std::size_t a = 0; a < n; ++a) {
    if (st.truth[a] != 1) continue;
    std::size_t hits_at_rank = 0;
    for (std::size_t b = 0; b < n; ++b)
      if (st.truth[b] == 1 && rank[b] <= rank[a]) ++hits_at_rank;
    ap += static_cast<double>(hits_at_rank) / static_cast<double>(rank[a]);
    if (rank[a] <= n_pos) ++rprec_hits;
  }
  out.pr = ap / static_cast<double>(n_pos);
  out.rprec = static_cast<double>(rprec_hits) / static_cast<double>(n_pos);
  return out;
}

}  // namespace pulearn
