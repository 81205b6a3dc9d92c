#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "pulearn/metrics.hpp"
#include "pulearn/rng.hpp"

using namespace pulearn;

namespace {

bool near(double a, double b, double tol = 1e-12) {
  return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

ScoredTruth make(std::vector<double> s, std::vector<int> t) {
  ScoredTruth st;
  st.scores = std::move(s);
  st.truth = std::move(t);
  return st;
}

}  // namespace

TEST_CASE("ranking metrics on the worked example") {
  const ScoredTruth st = make({0.9, 0.8, 0.7, 0.6}, {1, -1, 1, -1});
  REQUIRE(near(roc_auc(st), 0.75));
  REQUIRE(near(pr_auc(st), 5.0 / 6.0));
  REQUIRE(near(r_precision(st), 0.5));
}

TEST_CASE("perfect and worst-case rankings") {
  const ScoredTruth good = make({0.9, 0.8, 0.2, 0.1}, {1, 1, -1, -1});
  REQUIRE(roc_auc(good) == 1.0);
  REQUIRE(pr_auc(good) == 1.0);
  REQUIRE(r_precision(good) == 1.0);

  const ScoredTruth bad = make({0.9, 0.5, 0.1}, {-1, -1, 1});
  REQUIRE(roc_auc(bad) == 0.0);
  REQUIRE(near(pr_auc(bad), 1.0 / 3.0));
  REQUIRE(r_precision(bad) == 0.0);
}

TEST_CASE("tied scores earn half credit in the ranking") {
  const ScoredTruth st = make({1.0, 1.0, 0.0, 0.0}, {1, -1, 1, -1});
  REQUIRE(near(roc_auc(st), 0.5));

  const ScoredTruth all_tied = make({0.5, 0.5}, {1, -1});
  REQUIRE(near(roc_auc(all_tied), 0.5));
  // ties break by original index for the precision-style metrics
  REQUIRE(near(pr_auc(all_tied), 1.0));
  REQUIRE(r_precision(all_tied) == 1.0);

  const ScoredTruth flipped = make({0.5, 0.5}, {-1, 1});
  REQUIRE(near(pr_auc(flipped), 0.5));
  REQUIRE(r_precision(flipped) == 0.0);
}

TEST_CASE("metrics are invariant under strictly increasing transforms") {
  Rng rng(71);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 5 + rng.index(40);
    ScoredTruth st;
    std::size_t pos = 0;
    for (std::size_t i = 0; i < n; ++i) {
      st.scores.push_back(rng.uniform(-2.0, 2.0));
      const int y = rng.index(2) == 0 ? 1 : -1;
      pos += y == 1 ? 1 : 0;
      st.truth.push_back(y);
    }
    if (pos == 0 || pos == n) continue;

    ScoredTruth warped = st;
    for (double& s : warped.scores) s = 3.0 * s - 7.0;
    REQUIRE(roc_auc(st) == roc_auc(warped));
    REQUIRE(pr_auc(st) == pr_auc(warped));
    REQUIRE(r_precision(st) == r_precision(warped));
  }
}

TEST_CASE("class swap and score negation mirror the ranking") {
  Rng rng(73);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 4 + rng.index(30);
    ScoredTruth st;
    std::size_t pos = 0;
    for (std::size_t i = 0; i < n; ++i) {
      // a coarse grid forces plenty of ties
      st.scores.push_back(static_cast<double>(rng.index(5)) * 0.25);
      const int y = rng.index(2) == 0 ? 1 : -1;
      pos += y == 1 ? 1 : 0;
      st.truth.push_back(y);
    }
    if (pos == 0 || pos == n) continue;

    ScoredTruth swapped = st;
    for (int& y : swapped.truth) y = -y;
    REQUIRE(near(roc_auc(st) + roc_auc(swapped), 1.0));

    ScoredTruth negated = st;
    for (double& s : negated.scores) s = -s;
    REQUIRE(near(roc_auc(st) + roc_auc(negated), 1.0));
  }
}

TEST_CASE("fast metrics agree with the quadratic oracle") {
  Rng rng(79);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 2 + rng.index(59);
    ScoredTruth st;
    std::size_t pos = 0;
    for (std::size_t i = 0; i < n; ++i) {
      st.scores.push_back(static_cast<double>(rng.index(7)) / 6.0);
      const int y = rng.index(3) == 0 ? 1 : -1;
      pos += y == 1 ? 1 : 0;
      st.truth.push_back(y);
    }
    if (pos == 0 || pos == n) continue;

    const MetricTriple oracle = metric_oracle(st);
    REQUIRE(std::fabs(roc_auc(st) - oracle.roc) <= 1e-12);
    REQUIRE(std::fabs(pr_auc(st) - oracle.pr) <= 1e-12);
    REQUIRE(std::fabs(r_precision(st) - oracle.rprec) <= 1e-12);
  }
}

TEST_CASE("average precision walks the deterministic ranking") {
  // scores: 0.9(+) 0.8(-) 0.8(+) 0.3(-): the tie breaks by index, so the
  // negative at index 1 outranks the positive at index 2
  const ScoredTruth st = make({0.9, 0.8, 0.8, 0.3}, {1, -1, 1, -1});
  const double expected = (1.0 / 1.0 + 2.0 / 3.0) / 2.0;
  REQUIRE(near(pr_auc(st), expected));
  REQUIRE(near(r_precision(st), 0.5));
}

TEST_CASE("metric input validation") {
  REQUIRE_THROWS_AS(roc_auc(make({0.5}, {1})), Error);
  REQUIRE_THROWS_AS(roc_auc(make({0.5, 0.4}, {1, 1})), Error);
  REQUIRE_THROWS_AS(roc_auc(make({0.5, 0.4}, {-1, -1})), Error);
  REQUIRE_THROWS_AS(roc_auc(make({0.5, 0.4}, {1})), Error);
  REQUIRE_THROWS_AS(roc_auc(make({}, {})), Error);
  REQUIRE_THROWS_AS(pr_auc(make({0.5, 0.4}, {-1, -1})), Error);
  REQUIRE_THROWS_AS(roc_auc(make({0.5, 0.4}, {1, 2})), Error);

  ScoredTruth big;
  for (std::size_t i = 0; i < 1001; ++i) {
    big.scores.push_back(static_cast<double>(i));
    big.truth.push_back(i % 2 == 0 ? 1 : -1);
  }
  REQUIRE_THROWS_AS(metric_oracle(big), Error);
  REQUIRE_NOTHROW(roc_auc(big));
}
