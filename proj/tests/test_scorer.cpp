#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "pulearn/gradcheck.hpp"
#include "pulearn/scorer.hpp"

using namespace pulearn;

namespace {

bool near(double a, double b, double tol = 1e-12) {
  return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

ScorerParams zero_scorer(const std::vector<std::size_t>& dims) {
  ScorerParams p;
  p.layer_dims = dims;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    p.weights.emplace_back(dims[l], dims[l + 1]);
    p.biases.emplace_back(dims[l + 1], 0.0);
  }
  return p;
}

Matrix single_row(std::initializer_list<double> values) {
  Matrix m(1, values.size());
  std::size_t c = 0;
  for (double v : values) m(0, c++) = v;
  return m;
}

}  // namespace

TEST_CASE("an all-zero scorer is maximally uncertain") {
  const ScorerParams p = zero_scorer({2, 3, 1});
  Matrix batch(2, 2);
  batch(0, 0) = 1.5;
  batch(0, 1) = -2.0;
  batch(1, 0) = 0.0;
  batch(1, 1) = 7.0;
  const auto margins = forward_margin(p, batch);
  const auto probs = forward(p, batch);
  for (double m : margins) REQUIRE(m == 0.0);
  for (double q : probs) REQUIRE(q == 0.5);
}

TEST_CASE("single-unit network matches the closed form") {
  ScorerParams p = zero_scorer({1, 1, 1});
  const double w0 = 1.3, b0 = -0.4, w1 = -2.1, b1 = 0.7;
  p.weights[0](0, 0) = w0;
  p.biases[0][0] = b0;
  p.weights[1](0, 0) = w1;
  p.biases[1][0] = b1;

  for (double x : {-3.0, -0.2, 0.0, 0.30769230769230776, 1.0, 4.5}) {
    const double hidden = std::max(0.0, b0 + x * w0);
    const double expected = b1 + hidden * w1;
    const auto got = forward_margin(p, single_row({x}));
    REQUIRE(near(got[0], expected, 1e-15));
    const auto prob = forward(p, single_row({x}));
    REQUIRE(prob[0] == squash(got[0]));
  }
}

TEST_CASE("hidden units can be permuted without changing the function") {
  const ScorerParams p = init_scorer_dims({3, 4, 1}, 77);
  ScorerParams q = p;
  // swap hidden units 1 and 3: columns of layer 0, bias entries, rows of
  // layer 1
  for (std::size_t r = 0; r < 3; ++r)
    std::swap(q.weights[0](r, 1), q.weights[0](r, 3));
  std::swap(q.biases[0][1], q.biases[0][3]);
  std::swap(q.weights[1](1, 0), q.weights[1](3, 0));

  Matrix batch(5, 3);
  Rng rng(31);
  for (double& v : batch.data) v = rng.normal();
  const auto a = forward_margin(p, batch);
  const auto b = forward_margin(q, batch);
  for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(near(a[i], b[i]));
}

TEST_CASE("initialization respects the fan-in fan-out bound") {
  const ScorerParams p = init_scorer(7, 16, 3);
  REQUIRE(p.layer_dims ==
          std::vector<std::size_t>{7, 16, 16, 16, 16, 1});
  for (std::size_t l = 0; l < p.depth(); ++l) {
    const double bound = std::sqrt(
        6.0 / static_cast<double>(p.layer_dims[l] + p.layer_dims[l + 1]));
    for (double v : p.weights[l].data) {
      REQUIRE(std::fabs(v) <= bound);
    }
    for (double v : p.biases[l]) REQUIRE(v == 0.0);
  }
  // not all weights collapse to the same value
  REQUIRE(p.weights[0].data[0] != p.weights[0].data[1]);
}

TEST_CASE("initialization is deterministic in the seed") {
  const ScorerParams a = init_scorer(4, 8, 11);
  const ScorerParams b = init_scorer(4, 8, 11);
  const ScorerParams c = init_scorer(4, 8, 12);
  for (std::size_t l = 0; l < a.depth(); ++l) {
    REQUIRE(a.weights[l].data == b.weights[l].data);
  }
  REQUIRE(a.weights[0].data != c.weights[0].data);
}

TEST_CASE("parameter count follows the architecture") {
  const ScorerParams p = init_scorer_dims({3, 6, 6, 6, 6, 1}, 0);
  REQUIRE(p.param_count() == 157);
  const ScorerParams q = init_scorer_dims({1, 1}, 0);
  REQUIRE(q.param_count() == 2);
}

TEST_CASE("scorer shape validation") {
  REQUIRE_THROWS_AS(init_scorer_dims({3}, 0), Error);
  REQUIRE_THROWS_AS(init_scorer_dims({3, 0, 1}, 0), Error);
  ScorerParams p = zero_scorer({2, 2});  // output width 2
  REQUIRE_THROWS_AS(check_scorer(p), Error);
  ScorerParams ok = zero_scorer({2, 1});
  REQUIRE_NOTHROW(check_scorer(ok));
  Matrix wrong(1, 3);
  REQUIRE_THROWS_AS(forward_margin(ok, wrong), Error);
}

TEST_CASE("optimizer leaves parameters alone on a zero gradient") {
  ScorerParams p = init_scorer_dims({2, 3, 1}, 5);
  const ScorerParams before = p;
  AdamState state = init_adam(p);
  const ScorerGrad g = zero_grad_like(p);
  TrainConfig cfg;
  adam_step(p, g, state, cfg);
  adam_step(p, g, state, cfg);
  for (std::size_t l = 0; l < p.depth(); ++l) {
    REQUIRE(p.weights[l].data == before.weights[l].data);
    REQUIRE(p.biases[l] == before.biases[l]);
  }
}

TEST_CASE("optimizer follows the adaptive-moment recursion") {
  ScorerParams p = zero_scorer({1, 1});
  p.weights[0](0, 0) = 0.5;
  AdamState state = init_adam(p);
  TrainConfig cfg;  // lr 1e-3, beta1 0.9, beta2 0.999, eps 1e-8

  ScorerGrad g = zero_grad_like(p);
  g.weights[0](0, 0) = 0.3;
  adam_step(p, g, state, cfg);
  REQUIRE(near(p.weights[0](0, 0), 0.49900000003333334, 1e-13));
  REQUIRE(p.biases[0][0] == 0.0);

  g.weights[0](0, 0) = -0.2;
  adam_step(p, g, state, cfg);
  REQUIRE(near(p.weights[0](0, 0), 0.498855479509286, 1e-13));
  REQUIRE(p.biases[0][0] == 0.0);
  REQUIRE(state.step == 2);

  // replay the scalar recursion independently
  double w = 0.5, m = 0.0, v = 0.0;
  int t = 0;
  for (double grad : {0.3, -0.2}) {
    ++t;
    m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad;
    v = cfg.beta2 * v + (1.0 - cfg.beta2) * grad * grad;
    const double mhat = m / (1.0 - std::pow(cfg.beta1, t));
    const double vhat = v / (1.0 - std::pow(cfg.beta2, t));
    w -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.epsilon);
  }
  REQUIRE(p.weights[0](0, 0) == w);
}

TEST_CASE("gradient scaling flips the whole direction") {
  ScorerGrad g = zero_grad_like(zero_scorer({2, 2, 1}));
  g.weights[0](0, 0) = 1.5;
  g.biases[1][0] = -2.0;
  scale_grad(g, -1.0);
  REQUIRE(g.weights[0](0, 0) == -1.5);
  REQUIRE(g.biases[1][0] == 2.0);
}

TEST_CASE("backward chain rule on a linear scorer matches hand algebra") {
  ScorerParams p = zero_scorer({1, 1});
  p.weights[0](0, 0) = 0.8;
  p.biases[0][0] = -0.1;

  const double xp = 1.2, xu = -0.7;
  const Matrix bp = single_row({xp});
  const Matrix bu = single_row({xu});

  TrainConfig cfg;
  cfg.estimator = Estimator::upu;
  cfg.loss = LossKind::Sigmoid();
  cfg.prior = ClassPrior{0.4};

  const BackwardResult out = backward(p, bp, bu, cfg);
  const double mp = 0.8 * xp - 0.1;
  const double mu = 0.8 * xu - 0.1;
  const RiskGradient rg = risk_gradient({mp}, {mu}, cfg.prior, cfg.estimator,
                                        cfg.loss);
  REQUIRE(near(out.objective, rg.value));
  REQUIRE(out.branch == Branch::descent);
  REQUIRE(near(out.grad.weights[0](0, 0),
               rg.wrt_pos[0] * xp + rg.wrt_unl[0] * xu));
  REQUIRE(near(out.grad.biases[0][0], rg.wrt_pos[0] + rg.wrt_unl[0]));
}

TEST_CASE("backward squashes scores for probability losses") {
  ScorerParams p = zero_scorer({1, 1});
  p.weights[0](0, 0) = 1.1;
  p.biases[0][0] = 0.3;

  const double xp = 0.9, xu = -1.4;
  TrainConfig cfg;
  cfg.estimator = Estimator::ifpu;
  cfg.loss = LossKind::Focal(3.0);
  cfg.prior = ClassPrior{0.3};

  const BackwardResult out =
      backward(p, single_row({xp}), single_row({xu}), cfg);
  const double mp = 1.1 * xp + 0.3;
  const double mu = 1.1 * xu + 0.3;
  const double sp = squash(mp), su = squash(mu);
  const RiskGradient rg =
      risk_gradient({sp}, {su}, cfg.prior, cfg.estimator, cfg.loss);
  const double dp = rg.wrt_pos[0] * sp * (1.0 - sp);
  const double du = rg.wrt_unl[0] * su * (1.0 - su);
  REQUIRE(near(out.grad.weights[0](0, 0), dp * xp + du * xu));
  REQUIRE(near(out.grad.biases[0][0], dp + du));
  REQUIRE(near(out.objective, rg.value));
}

TEST_CASE("training configuration validation") {
  TrainConfig cfg;
  cfg.max_epochs = 0;
  REQUIRE_THROWS_AS(check_train_config(cfg), Error);
  cfg = TrainConfig{};
  cfg.batch_size = 1;
  REQUIRE_THROWS_AS(check_train_config(cfg), Error);
  cfg = TrainConfig{};
  cfg.learning_rate = 0.0;
  REQUIRE_THROWS_AS(check_train_config(cfg), Error);
  cfg = TrainConfig{};
  cfg.beta1 = 1.0;
  REQUIRE_THROWS_AS(check_train_config(cfg), Error);
  cfg = TrainConfig{};
  cfg.prior = ClassPrior{0.0};
  REQUIRE_THROWS_AS(check_train_config(cfg), Error);
  REQUIRE_NOTHROW(check_train_config(TrainConfig{}));
}

TEST_CASE("quick finite-difference audit of the full chain") {
  GradCheckConfig cfg;
  cfg.trials = 40;
  cfg.seed = 2024;
  const GradCheckReport report = grad_check(cfg);
  INFO(report.describe());
  REQUIRE(report.pass);
  REQUIRE(report.descent_trials + report.ascent_trials == 40);
  REQUIRE(report.ascent_trials >= 10);
}
